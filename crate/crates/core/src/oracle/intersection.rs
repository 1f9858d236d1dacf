//! Exact psi-class intersection numbers of moduli of curves, computed by the
//! KdV/Virasoro recursion with string and dilaton shortcuts, memoized, and
//! optionally persisted to a plain-text cache file.
//!
//! The recursion removes the largest index `d* = n+1 >= 2`:
//!
//! ```text
//! (2n+3)!! <tau_{n+1} prod_j tau_{d_j}>_g =
//!     sum_j [(2(n+d_j)+1)!! / (2 d_j - 1)!!] <tau_{n+d_j} prod_{i!=j}>_g
//!   + 1/2 sum_{a+b=n-1} (2a+1)!!(2b+1)!! [ <tau_a tau_b prod>_{g-1}
//!       + sum_{g1+g2=g} sum_{I ⊔ J} <tau_a I>_{g1} <tau_b J>_{g2} ]
//! ```
//!
//! Entries with a zero index reduce by the string equation, an all-ones entry
//! by the dilaton equation. The two seeds are the genus-0 three-point value 1
//! and the genus-1 one-point value 1/24. All three ingredients are
//! cross-validated against each other and against the genus-0 closed form in
//! the test suite, so a mis-transcribed coefficient cannot silently pass.

use std::collections::BTreeMap;
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::sync::RwLock;

use num::{BigInt, One, Zero};
use thiserror::Error;

use crate::expr::{rat, ratio, Rat};

/// Memoized intersection-number oracle. Concurrent readers share the cache;
/// insertions are serialized behind the lock.
#[derive(Debug, Default)]
pub struct Oracle {
    cache: RwLock<BTreeMap<Key, Rat>>,
}

/// `(genus, degrees sorted non-increasing)`.
pub type Key = (u32, Vec<u32>);

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cache entry at line {line} violates the selection rule")]
    Selection { line: usize },
    #[error("cache entry for {key:?} disagrees with the in-memory value")]
    Conflict { key: Key },
}

fn double_factorial(n: i64) -> BigInt {
    // (-1)!! = 1 by convention.
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Selection rule: the number vanishes unless the degrees fill the dimension
/// of the moduli space.
pub fn selection_ok(genus: u32, degrees: &[u32]) -> bool {
    let sum: i64 = degrees.iter().map(|&d| d as i64).sum();
    sum == 3 * genus as i64 - 3 + degrees.len() as i64
}

/// Genus-0 closed form `(k-3)! / prod d_i!`, the independent cross-check of
/// the recursion.
pub fn genus0_closed_form(degrees: &[u32]) -> Rat {
    let k = degrees.len();
    if k < 3 || !selection_ok(0, degrees) {
        return Rat::zero();
    }
    let mut numer = BigInt::one();
    for i in 1..=(k - 3) as u64 {
        numer *= i;
    }
    let mut denom = BigInt::one();
    for &d in degrees {
        for i in 1..=d as u64 {
            denom *= i;
        }
    }
    Rat::new(numer, denom)
}

impl Oracle {
    pub fn new() -> Self {
        Oracle::default()
    }

    pub fn len(&self) -> usize {
        self.cache.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `<tau_{d_1} ... tau_{d_k}>_g`, exact; 0 when the selection rule fails.
    pub fn intersection(&self, genus: u32, degrees: &[u32]) -> Rat {
        let mut ds: Vec<u32> = degrees.to_vec();
        ds.sort_unstable_by(|a, b| b.cmp(a));
        self.lookup(genus, ds)
    }

    fn lookup(&self, genus: u32, ds: Vec<u32>) -> Rat {
        if ds.is_empty() || !selection_ok(genus, &ds) {
            return Rat::zero();
        }
        let key = (genus, ds);
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return v.clone();
        }
        let value = self.compute(key.0, &key.1);
        self.cache.write().unwrap().insert(key, value.clone());
        value
    }

    fn compute(&self, g: u32, ds: &[u32]) -> Rat {
        let k = ds.len();
        // Seeds.
        if g == 0 && k == 3 {
            return rat(1); // degrees are all zero by the selection rule
        }
        if g == 1 && k == 1 {
            return ratio(1, 24); // degree is 1 by the selection rule
        }
        // String equation: remove a zero index (degrees sorted descending, so
        // a zero sits at the end).
        if *ds.last().unwrap() == 0 {
            let rest = &ds[..k - 1];
            let mut acc = Rat::zero();
            for j in 0..rest.len() {
                if rest[j] >= 1 {
                    let mut sub = rest.to_vec();
                    sub[j] -= 1;
                    acc += self.intersection(g, &sub);
                }
            }
            return acc;
        }
        // Dilaton equation: all indices are 1 (forces g = 1).
        if ds[0] == 1 {
            let rest = &ds[1..];
            return rat(2 * g as i64 - 2 + rest.len() as i64) * self.intersection(g, rest);
        }
        // Main recursion on the largest index d* = n+1 >= 2.
        let n = (ds[0] - 1) as i64;
        let rest = &ds[1..];
        let mut total = Rat::zero();
        for j in 0..rest.len() {
            let dj = rest[j] as i64;
            let coeff = Rat::new(double_factorial(2 * (n + dj) + 1), double_factorial(2 * dj - 1));
            let mut sub: Vec<u32> = Vec::with_capacity(rest.len());
            sub.extend_from_slice(&rest[..j]);
            sub.push((n + dj) as u32);
            sub.extend_from_slice(&rest[j + 1..]);
            total += coeff * self.intersection(g, &sub);
        }
        let mut half = Rat::zero();
        for a in 0..=(n - 1) {
            let b = n - 1 - a;
            let w = Rat::from_integer(double_factorial(2 * a + 1) * double_factorial(2 * b + 1));
            let mut inner = Rat::zero();
            if g >= 1 {
                let mut sub = rest.to_vec();
                sub.push(a as u32);
                sub.push(b as u32);
                inner += self.intersection(g - 1, &sub);
            }
            // Splittings of the remaining (labeled) insertions.
            for g1 in 0..=g {
                let g2 = g - g1;
                for mask in 0..(1u32 << rest.len()) {
                    let mut left = vec![a as u32];
                    let mut right = vec![b as u32];
                    for (i, &d) in rest.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            left.push(d);
                        } else {
                            right.push(d);
                        }
                    }
                    let lv = self.intersection(g1, &left);
                    if lv.is_zero() {
                        continue;
                    }
                    inner += lv * self.intersection(g2, &right);
                }
            }
            half += w * inner;
        }
        total += half * ratio(1, 2);
        total / Rat::from_integer(double_factorial(2 * n + 3))
    }

    /// Writes the cache as UTF-8 lines `g | d1 d2 ... dk | p/q`, degrees
    /// non-increasing, rationals in lowest terms.
    pub fn save(&self, path: &Path) -> Result<(), CacheError> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "# psi-intersection numbers: g | degrees (non-increasing) | value")?;
        for ((g, ds), v) in self.cache.read().unwrap().iter() {
            let ds: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
            writeln!(w, "{g} | {} | {}", ds.join(" "), crate::expr::print_rat(v))?;
        }
        Ok(())
    }

    /// Loads a cache file and merges it in; the union survives, and any
    /// conflicting value is an error.
    pub fn load(&self, path: &Path) -> Result<usize, CacheError> {
        let file = std::fs::File::open(path)?;
        let reader = std::io::BufReader::new(file);
        let mut added = 0;
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let parts: Vec<&str> = trimmed.split('|').collect();
            if parts.len() != 3 {
                return Err(CacheError::Parse {
                    line: lineno,
                    msg: "expected `g | degrees | value`".into(),
                });
            }
            let g: u32 = parts[0].trim().parse().map_err(|_| CacheError::Parse {
                line: lineno,
                msg: "bad genus".into(),
            })?;
            let mut ds = Vec::new();
            for tok in parts[1].split_whitespace() {
                ds.push(tok.parse::<u32>().map_err(|_| CacheError::Parse {
                    line: lineno,
                    msg: format!("bad degree `{tok}`"),
                })?);
            }
            if ds.is_empty() {
                return Err(CacheError::Parse { line: lineno, msg: "empty degree list".into() });
            }
            let value = parse_rat(parts[2].trim()).ok_or_else(|| CacheError::Parse {
                line: lineno,
                msg: format!("bad rational `{}`", parts[2].trim()),
            })?;
            if !ds.windows(2).all(|w| w[0] >= w[1]) {
                return Err(CacheError::Parse {
                    line: lineno,
                    msg: "degrees must be non-increasing".into(),
                });
            }
            if !selection_ok(g, &ds) && !value.is_zero() {
                return Err(CacheError::Selection { line: lineno });
            }
            let key = (g, ds);
            let mut cache = self.cache.write().unwrap();
            match cache.get(&key) {
                Some(existing) if *existing != value => {
                    return Err(CacheError::Conflict { key });
                }
                Some(_) => {}
                None => {
                    cache.insert(key, value);
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    /// Snapshot of all cached keys, for invariant sweeps.
    pub fn keys(&self) -> Vec<Key> {
        self.cache.read().unwrap().keys().cloned().collect()
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_values() {
        let or = Oracle::new();
        assert_eq!(or.intersection(0, &[0, 0, 0]), rat(1));
        assert_eq!(or.intersection(1, &[1]), ratio(1, 24));
        assert_eq!(or.intersection(0, &[1, 1, 1]), rat(0)); // selection rule
    }

    #[test]
    fn known_values() {
        let or = Oracle::new();
        assert_eq!(or.intersection(2, &[4]), ratio(1, 1152));
        assert_eq!(or.intersection(2, &[3, 2]), ratio(29, 5760));
        assert_eq!(or.intersection(1, &[0, 2]), ratio(1, 24));
        assert_eq!(or.intersection(1, &[1, 1]), ratio(1, 24));
        assert_eq!(or.intersection(1, &[0, 1, 2]), ratio(1, 12));
        assert_eq!(or.intersection(0, &[0, 0, 0, 1]), rat(1));
        assert_eq!(or.intersection(0, &[0, 0, 0, 0, 2]), rat(1));
        assert_eq!(or.intersection(2, &[0, 5]), ratio(1, 1152)); // string of <tau_4>_2
    }

    #[test]
    fn closed_form_matches_recursion_up_to_k8() {
        let or = Oracle::new();
        for k in 3..=8usize {
            // all degree vectors with sum k-3
            let target = k - 3;
            let mut stack = vec![(Vec::<u32>::new(), target)];
            while let Some((prefix, rem)) = stack.pop() {
                if prefix.len() == k {
                    if rem == 0 {
                        assert_eq!(
                            or.intersection(0, &prefix),
                            genus0_closed_form(&prefix),
                            "k={k} degrees={prefix:?}"
                        );
                    }
                    continue;
                }
                let slots_left = k - prefix.len() - 1;
                for d in 0..=rem {
                    if rem - d <= slots_left * target {
                        let mut p = prefix.clone();
                        p.push(d as u32);
                        stack.push((p, rem - d));
                    }
                }
            }
        }
    }

    #[test]
    fn string_and_dilaton_recursions_hold_on_cache() {
        let or = Oracle::new();
        // Populate with a spread of values.
        for g in 0..=2u32 {
            for k in 1..=4usize {
                let total = 3 * g as i64 - 3 + k as i64;
                if total < 0 {
                    continue;
                }
                let mut stack = vec![(Vec::<u32>::new(), total)];
                while let Some((prefix, rem)) = stack.pop() {
                    if prefix.len() == k {
                        if rem == 0 {
                            or.intersection(g, &prefix);
                        }
                        continue;
                    }
                    for d in 0..=rem {
                        let mut p = prefix.clone();
                        p.push(d as u32);
                        stack.push((p, rem - d));
                    }
                }
            }
        }
        for (g, ds) in or.keys() {
            // string: <tau_0 X>_g = sum_j <... tau_{d_j - 1} ...>_g
            let mut with0 = ds.clone();
            with0.push(0);
            let lhs = or.intersection(g, &with0);
            let mut rhs = Rat::zero();
            for j in 0..ds.len() {
                if ds[j] >= 1 {
                    let mut sub = ds.clone();
                    sub[j] -= 1;
                    rhs += or.intersection(g, &sub);
                }
            }
            assert_eq!(lhs, rhs, "string fails at g={g} ds={ds:?}");
            // dilaton: <tau_1 X>_g = (2g-2+k) <X>_g
            let mut with1 = ds.clone();
            with1.push(1);
            let lhs = or.intersection(g, &with1);
            let rhs = rat(2 * g as i64 - 2 + ds.len() as i64) * or.intersection(g, &ds);
            assert_eq!(lhs, rhs, "dilaton fails at g={g} ds={ds:?}");
        }
    }

    #[test]
    fn cache_roundtrip_and_errors() {
        let or = Oracle::new();
        or.intersection(2, &[4]);
        or.intersection(1, &[1]);
        or.intersection(0, &[0, 0, 0, 2, 1]);
        let dir = std::env::temp_dir().join(format!("ints-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.txt");
        or.save(&path).unwrap();

        let fresh = Oracle::new();
        let added = fresh.load(&path).unwrap();
        assert!(added >= 3);
        assert_eq!(
            fresh.cache.read().unwrap().clone(),
            or.cache.read().unwrap().clone()
        );

        // explicit value line
        let path2 = dir.join("one.txt");
        std::fs::write(&path2, "# comment\n2 | 4 | 1/1152\n").unwrap();
        let o2 = Oracle::new();
        o2.load(&path2).unwrap();
        assert_eq!(o2.intersection(2, &[4]), ratio(1, 1152));

        // corrupt line reports its number
        let path3 = dir.join("bad.txt");
        std::fs::write(&path3, "2 | 4 | 1/1152\nnot a line\n").unwrap();
        let o3 = Oracle::new();
        match o3.load(&path3) {
            Err(CacheError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
