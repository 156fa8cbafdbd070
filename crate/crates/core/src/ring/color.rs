use serde::{Deserialize, Serialize};

use super::layout::RingLayout;
use super::{RingCode, RingError};
use crate::graph::{is_proper, Coloring};
use crate::parity::{greedy_path, ExhaustiveSearch, ParitySeq};

/// Coloring of one fan's base path given its apex and end colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanFill {
    pub apex_color: u8,
    pub end_colors: (u8, u8),
    pub size: u32,
    /// Colors of the `size - 1` interior path vertices, in path order from `u`.
    pub interior: Vec<u8>,
}

fn third(a: u8, b: u8) -> u8 {
    6 - a - b
}

/// Extend apex and end colors over a fan of `t` triangles.
///
/// The interior is forced: it alternates between the color avoiding both apex and
/// `u`, and `u` itself. Feasible iff `t` is even with `u = w`, or odd with `u != w`.
pub fn fill_fan(apex_color: u8, u_color: u8, w_color: u8, t: u32) -> Result<FanFill, RingError> {
    for c in [apex_color, u_color, w_color] {
        if !(1..=3).contains(&c) {
            return Err(RingError::InvalidInput(format!("color {c} outside 1..=3")));
        }
    }
    if t == 0 {
        return Err(RingError::InvalidInput("fan with no triangles".into()));
    }
    if apex_color == u_color || apex_color == w_color {
        return Err(RingError::InvalidInput(format!(
            "apex color {apex_color} equals an end color ({u_color}, {w_color})"
        )));
    }
    let even = t.is_multiple_of(2);
    if even != (u_color == w_color) {
        return Err(RingError::Infeasible(format!(
            "{t} triangles with end colors {u_color} and {w_color}"
        )));
    }
    let z = third(apex_color, u_color);
    let interior = (1..t).map(|k| if k % 2 == 1 { z } else { u_color }).collect();
    Ok(FanFill { apex_color, end_colors: (u_color, w_color), size: t, interior })
}

/// Fill every fan's interior from the apex colors already present in `colors`.
fn fill_all(layout: &RingLayout, colors: &mut [u8], only: Option<usize>) -> Result<(), RingError> {
    let len = layout.fan_count();
    let fans: Vec<usize> = match only {
        Some(j) => vec![j],
        None => (0..len).collect(),
    };
    for t in fans {
        let path = layout.base_path(t);
        let (u, w) = (colors[path[0]], colors[*path.last().unwrap()]);
        let fill = fill_fan(colors[layout.apex(t)], u, w, layout.runs[t])
            .map_err(|e| RingError::InternalInconsistency(format!("fan {t}: {e}")))?;
        for (&v, &c) in path[1..path.len() - 1].iter().zip(&fill.interior) {
            colors[v] = c;
        }
    }
    Ok(())
}

fn color_layout(layout: &RingLayout, path: &[usize]) -> Result<Vec<u8>, RingError> {
    let mut colors = vec![0u8; layout.vertex_count()];
    let Some((&j, rest)) = path.split_first() else {
        let len = layout.fan_count();
        let apex_color = |t: usize| -> u8 {
            if len == 2 {
                t as u8 + 1
            } else {
                (t % 3) as u8 + 1
            }
        };
        if !(len == 2 && layout.runs.iter().all(|r| r % 2 == 0)
            || len.is_multiple_of(6) && layout.runs.iter().all(|r| r % 2 == 1))
        {
            return Err(RingError::InternalInconsistency(format!(
                "collapse chain ended on a non-accepting layout {:?}",
                layout.runs
            )));
        }
        for t in 0..len {
            colors[layout.apex(t)] = apex_color(t);
        }
        fill_all(layout, &mut colors, None)?;
        return Ok(colors);
    };
    let fc = layout.fan_collapse(j)?;
    let sub = color_layout(&fc.ring, rest)?;
    for (v, image) in fc.vertex_map.iter().enumerate() {
        if let Some(w) = image {
            colors[v] = sub[*w];
        }
    }
    fill_all(layout, &mut colors, Some(j))?;
    Ok(colors)
}

/// Collapse chain to follow: the greedy chain when it accepts, otherwise one found
/// by exhaustive search.
fn accepting_chain(seq: &ParitySeq) -> Option<Vec<usize>> {
    match greedy_path(seq) {
        Some((path, true)) => Some(path),
        _ => ExhaustiveSearch::new().accepting_path(seq),
    }
}

/// Constructive 3-coloring of `realize(code)`, or `None` when the ring is not
/// 3-colorable. The result is checked against the realized graph before return.
pub fn color3(code: &RingCode) -> Result<Option<Coloring>, RingError> {
    let Some(chain) = accepting_chain(&code.cps()) else {
        return Ok(None);
    };
    let layout = code.layout();
    let colors = color_layout(&layout, &chain)?;
    let coloring = Coloring::new(3, colors)?;
    let g = code.realize();
    if !is_proper(&g, &coloring)? {
        return Err(RingError::InternalInconsistency(format!(
            "constructed coloring of ring {code} is improper"
        )));
    }
    Ok(Some(coloring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{count_colorings, find_coloring};

    #[test]
    fn fill_examples() {
        assert_eq!(fill_fan(2, 1, 1, 2).unwrap().interior, vec![3]);
        assert_eq!(fill_fan(2, 1, 1, 4).unwrap().interior, vec![3, 1, 3]);
        assert!(matches!(fill_fan(2, 1, 1, 3), Err(RingError::Infeasible(_))));
        assert!(matches!(fill_fan(2, 2, 1, 3), Err(RingError::InvalidInput(_))));
        assert_eq!(fill_fan(1, 2, 3, 1).unwrap().interior, Vec::<u8>::new());
        assert_eq!(fill_fan(1, 2, 3, 3).unwrap().interior, vec![3, 2]);
    }

    #[test]
    fn fill_feasibility_matches_parity_rule() {
        for apex in 1..=3u8 {
            for u in (1..=3u8).filter(|&u| u != apex) {
                for w in (1..=3u8).filter(|&w| w != apex) {
                    for t in 1..8 {
                        let expected = (t % 2 == 0) == (u == w);
                        let got = fill_fan(apex, u, w, t);
                        assert_eq!(got.is_ok(), expected, "{apex} {u} {w} {t}");
                        if let Ok(f) = got {
                            let mut path = vec![u];
                            path.extend(&f.interior);
                            path.push(w);
                            assert!(path.iter().all(|&c| c != apex));
                            assert!(path.windows(2).all(|p| p[0] != p[1]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn octahedron_apex_colors() {
        let code: RingCode = "1,1,1,1,1,1".parse().unwrap();
        let c = color3(&code).unwrap().unwrap();
        let l = code.layout();
        let apex: Vec<u8> = (0..6).map(|t| c.get(l.apex(t))).collect();
        assert_eq!(apex, vec![1, 2, 3, 1, 2, 3]);
    }

    #[test]
    fn examples() {
        assert_eq!(color3(&"3,3,3,3".parse().unwrap()).unwrap(), None);
        let code: RingCode = "2,2,2,2".parse().unwrap();
        let c = color3(&code).unwrap().unwrap();
        let inner: Vec<u8> = (0..4).map(|v| c.get(v)).collect();
        assert_eq!(inner[0], inner[2]);
        assert_eq!(inner[1], inner[3]);
        assert_ne!(inner[0], inner[1]);
    }

    #[test]
    fn agrees_with_oracle_on_small_codes() {
        let codes = [
            "2,1,2,3", "1,2,2,2", "2,2,2,2", "1,1,1,1,1,1", "3,3,3,3", "2,1,2,2", "2,1,1,2,1,1",
            "4,2,2,4", "1,3,2,3", "2,2,1,1,1,1,1,1", "2,3,2,1,2,1", "6,1,1,1,1,1,2,1",
        ];
        for s in codes {
            let code: RingCode = s.parse().unwrap();
            let g = code.realize();
            let oracle = find_coloring(&g, 3).unwrap().is_some();
            let built = color3(&code).unwrap();
            assert_eq!(built.is_some(), oracle, "{s}");
            assert_eq!(code.decide3(), oracle, "{s}");
            if oracle {
                assert_eq!(count_colorings(&g, 3).unwrap(), 6, "{s}");
            }
        }
    }
}
