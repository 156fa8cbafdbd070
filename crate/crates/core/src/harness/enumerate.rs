use rand::Rng;

use super::HarnessError;
use crate::ring::RingCode;

/// Streams every valid ring code with at most `max_total` triangles, once per
/// rotation class. Order: by total, then by number of runs, then lexicographic.
/// Reflections are distinct codes (they describe mirror-image embeddings).
pub fn enumerate_codes(max_total: usize) -> CodeEnumerator {
    CodeEnumerator { max_total, total: 0, parts: 0, current: None }
}

#[derive(Debug, Clone)]
pub struct CodeEnumerator {
    max_total: usize,
    total: usize,
    parts: usize,
    current: Option<Vec<u32>>,
}

/// Lexicographic successor among compositions of the same sum and length.
fn next_composition(c: &mut [u32]) -> bool {
    let p = c.len();
    let mut tail: u32 = c[p - 1];
    for i in (0..p - 1).rev() {
        let slots = (p - 1 - i) as u32;
        if tail > slots {
            c[i] += 1;
            for x in &mut c[i + 1..p - 1] {
                *x = 1;
            }
            c[p - 1] = tail - 1 - (slots - 1);
            return true;
        }
        tail += c[i];
    }
    false
}

impl CodeEnumerator {
    /// Advance to the next composition, moving on to more parts or a larger total
    /// when the current family is exhausted.
    fn step(&mut self) -> Option<&[u32]> {
        if self.total > self.max_total {
            return None;
        }
        if let Some(c) = &mut self.current {
            if next_composition(c) {
                return self.current.as_deref();
            }
        }
        // open the next (total, parts) family
        if self.parts == 0 || self.parts + 2 > self.total {
            self.total = if self.total == 0 { 6 } else { self.total + 1 };
            self.parts = 4;
            if self.total > self.max_total {
                self.current = None;
                return None;
            }
        } else {
            self.parts += 2;
        }
        let mut first = vec![1u32; self.parts];
        first[self.parts - 1] = (self.total - self.parts + 1) as u32;
        self.current = Some(first);
        self.current.as_deref()
    }
}

impl Iterator for CodeEnumerator {
    type Item = RingCode;

    fn next(&mut self) -> Option<RingCode> {
        while let Some(runs) = self.step() {
            let runs = runs.to_vec();
            if let Ok(code) = RingCode::new(runs) {
                if code.is_canonical() {
                    return Some(code);
                }
            }
        }
        None
    }
}

/// Uniformly random composition of `sum` into `parts` positive parts.
fn random_composition<R: Rng>(rng: &mut R, sum: u32, parts: usize) -> Vec<u32> {
    let mut cuts = rand::seq::index::sample(rng, sum as usize - 1, parts - 1).into_vec();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0u32;
    for c in cuts {
        out.push(c as u32 + 1 - prev);
        prev = c as u32 + 1;
    }
    out.push(sum - prev);
    out
}

/// Random code with `fans / 2` A-runs interleaved with B-runs of given sums.
pub fn random_code_with<R: Rng>(rng: &mut R, inner: u32, outer: u32, pairs: usize) -> Result<RingCode, HarnessError> {
    if pairs < 2 || inner < pairs as u32 || outer < pairs as u32 {
        return Err(HarnessError::InvalidConfig(format!(
            "cannot split |C_i| = {inner}, |C_o| = {outer} into {pairs} fan pairs"
        )));
    }
    let a = random_composition(rng, inner, pairs);
    let b = random_composition(rng, outer, pairs);
    let runs = a.iter().zip(&b).flat_map(|(&x, &y)| [x, y]).collect();
    Ok(RingCode::new(runs)?)
}

/// Random valid code with exactly `triangles` triangles, in canonical rotation.
pub fn random_code<R: Rng>(rng: &mut R, triangles: usize) -> Result<RingCode, HarnessError> {
    if triangles < 6 {
        return Err(HarnessError::InvalidConfig(format!("a ring needs at least 6 triangles, got {triangles}")));
    }
    let n = triangles as u32;
    let pairs = rng.gen_range(2..=n / 2) as usize;
    // inner sum in [max(3, pairs), n - max(3, pairs)]
    let lo = 3.max(pairs as u32);
    let inner = rng.gen_range(lo..=n - lo);
    Ok(random_code_with(rng, inner, n - inner, pairs)?.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn counts_match_independent_script() {
        // brute-force Python count over all compositions modulo even rotation
        let expected = [(5, 0), (6, 3), (7, 11), (8, 32), (9, 76), (10, 165), (11, 333), (12, 662)];
        for (budget, count) in expected {
            assert_eq!(enumerate_codes(budget).count(), count, "budget {budget}");
        }
    }

    #[test]
    fn budget_six() {
        let got: Vec<String> = enumerate_codes(6).map(|c| c.to_string()).collect();
        assert_eq!(got, vec!["1,1,2,2", "1,2,2,1", "1,1,1,1,1,1"]);
        // (1,1,1,2)-type codes fail the cycle sums
        assert!(RingCode::new(vec![1, 1, 1, 2]).is_err());
    }

    #[test]
    fn no_duplicates_and_all_canonical() {
        let all: Vec<RingCode> = enumerate_codes(11).collect();
        let set: HashSet<RingCode> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        assert!(all.iter().all(|c| c.is_canonical() && c.triangles() <= 11));
    }

    #[test]
    fn composition_successor() {
        let mut c = vec![1, 1, 3];
        let mut seen = vec![c.clone()];
        while next_composition(&mut c) {
            seen.push(c.clone());
        }
        assert_eq!(seen, vec![vec![1, 1, 3], vec![1, 2, 2], vec![1, 3, 1], vec![2, 1, 2], vec![2, 2, 1], vec![3, 1, 1]]);
    }

    #[test]
    fn random_codes_have_requested_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 6..30 {
            let c = random_code(&mut rng, n).unwrap();
            assert_eq!(c.triangles(), n);
            assert!(c.is_canonical());
        }
        assert!(random_code(&mut rng, 5).is_err());
    }
}
