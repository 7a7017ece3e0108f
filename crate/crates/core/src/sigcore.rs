//! Integer signatures: weakly decreasing tuples of integers.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// A weakly decreasing tuple of integers. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Signature(Vec<i64>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InterlaceKind {
    P,
    Q,
}

/// `|λ|`, `n(λ)`, multiplicities and number of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub size: i64,
    pub weighted: i64,
    pub mults: BTreeMap<i64, usize>,
    pub length: usize,
}

#[derive(Clone, Debug)]
pub enum Action<'a> {
    Shift(i64),
    Negate,
    /// Append parts; `resort` permits sorting an out-of-order result.
    Concat(&'a Signature, bool),
}

pub const DEFAULT_ENUM_GUARD: i64 = 64;

impl Signature {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSignature(format!("{parts:?} is not weakly decreasing")));
        }
        Ok(Signature(parts))
    }

    /// Sort a tuple into a signature.
    pub fn sorted(mut parts: Vec<i64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Signature(parts)
    }

    pub fn empty() -> Self {
        Signature(Vec::new())
    }

    /// `c[n]`: the constant signature.
    pub fn constant(c: i64, n: usize) -> Self {
        Signature(vec![c; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(0, n)
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Part `i` (0-based).
    pub fn part(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn first(&self) -> Option<i64> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<i64> {
        self.0.last().copied()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `n(λ) = Σ (i-1) λ_i` with 1-based `i`.
    pub fn weighted(&self) -> i64 {
        self.0.iter().enumerate().map(|(i, &x)| i as i64 * x).sum()
    }

    /// Number of parts equal to `k`.
    pub fn mult(&self, k: i64) -> usize {
        self.0.iter().filter(|&&x| x == k).count()
    }

    pub fn mults(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for &x in &self.0 {
            *m.entry(x).or_insert(0) += 1;
        }
        m
    }

    /// Number of positive parts.
    pub fn length(&self) -> usize {
        self.0.iter().filter(|&&x| x > 0).count()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.last().map_or(true, |&x| x >= 0)
    }

    pub fn stats(&self) -> Stats {
        Stats {
            size: self.size(),
            weighted: self.weighted(),
            mults: self.mults(),
            length: self.length(),
        }
    }

    pub fn shift(&self, d: i64) -> Self {
        Signature(self.0.iter().map(|x| x + d).collect())
    }

    /// `-λ = (-λ_n, ..., -λ_1)`.
    pub fn negate(&self) -> Self {
        Signature(self.0.iter().rev().map(|x| -x).collect())
    }

    pub fn concat(&self, other: &Signature, resort: bool) -> Result<Self> {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        if resort {
            Ok(Self::sorted(v))
        } else {
            Self::new(v)
        }
    }

    pub fn transform(&self, action: Action<'_>) -> Result<Self> {
        match action {
            Action::Shift(d) => Ok(self.shift(d)),
            Action::Negate => Ok(self.negate()),
            Action::Concat(mu, resort) => self.concat(mu, resort),
        }
    }

    /// Pad with zeros (or truncate zero parts) to length `n`.
    pub fn with_len(&self, n: usize) -> Result<Self> {
        if n >= self.len() {
            let mut v = self.0.clone();
            v.resize(n, 0);
            Self::new(v)
        } else if self.0[n..].iter().all(|&x| x == 0) {
            Ok(Signature(self.0[..n].to_vec()))
        } else {
            Err(Error::Dimension(format!("{self} has more than {n} nonzero parts")))
        }
    }

    /// Entrywise sum of two signatures of equal length.
    pub fn add(&self, o: &Signature) -> Result<Self> {
        if self.len() != o.len() {
            return Err(Error::Dimension(format!("{self} + {o}")));
        }
        Ok(Signature(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect()))
    }

    /// Entrywise scaling by a nonnegative integer.
    pub fn scale(&self, k: i64) -> Self {
        assert!(k >= 0);
        Signature(self.0.iter().map(|x| x * k).collect())
    }

    /// Containment `self ⊂ o` for equal lengths.
    pub fn contained_in(&self, o: &Signature) -> bool {
        self.len() == o.len() && self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }
}

impl TryFrom<Vec<i64>> for Signature {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Signature::new(v)
    }
}

impl From<Signature> for Vec<i64> {
    fn from(s: Signature) -> Self {
        s.0
    }
}

impl FromStr for Signature {
    type Err = Error;
    /// Comma-separated parts, e.g. `3,1,0`. The empty string is the empty signature.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() {
            return Ok(Signature::empty());
        }
        let parts = s
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse(format!("signature {s:?}: {e}")))?;
        Signature::new(parts)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// Whether `inner` interlaces `outer`.
///
/// P: `len(outer) = len(inner) + 1` and `outer_i >= inner_i >= outer_{i+1}`.
/// Q: equal lengths, `inner ⊂ outer` and `inner_i >= outer_{i+1}`.
pub fn interlace(kind: InterlaceKind, inner: &Signature, outer: &Signature) -> Result<bool> {
    let (a, b) = (inner.parts(), outer.parts());
    match kind {
        InterlaceKind::P => {
            if b.len() != a.len() + 1 {
                return Err(Error::Dimension(format!(
                    "P-interlacing needs len(outer) = len(inner) + 1, got {inner} and {outer}"
                )));
            }
            Ok((0..a.len()).all(|i| b[i] >= a[i] && a[i] >= b[i + 1]))
        }
        InterlaceKind::Q => {
            if b.len() != a.len() {
                return Err(Error::Dimension(format!(
                    "Q-interlacing needs equal lengths, got {inner} and {outer}"
                )));
            }
            Ok((0..a.len()).all(|i| b[i] >= a[i] && (i + 1 == b.len() || a[i] >= b[i + 1])))
        }
    }
}

/// Signatures of length `n` with parts in `[low, high]`, lexicographically decreasing.
pub struct SigIter {
    cur: Option<Vec<i64>>,
    low: i64,
    size: Option<i64>,
}

impl Iterator for SigIter {
    type Item = Signature;

    fn next(&mut self) -> Option<Signature> {
        loop {
            let cur = self.cur.take()?;
            // Successor: decrement the rightmost part above `low`, refill the tail.
            self.cur = cur.iter().rposition(|&x| x > self.low).map(|i| {
                let mut nxt = cur.clone();
                nxt[i] -= 1;
                for j in i + 1..nxt.len() {
                    nxt[j] = nxt[i];
                }
                nxt
            });
            if self.size.map_or(true, |s| cur.iter().sum::<i64>() == s) {
                return Some(Signature(cur));
            }
        }
    }
}

pub fn enumerate(n: usize, low: i64, high: i64, size: Option<i64>) -> Result<SigIter> {
    enumerate_guarded(n, low, high, size, DEFAULT_ENUM_GUARD)
}

pub fn enumerate_guarded(
    n: usize,
    low: i64,
    high: i64,
    size: Option<i64>,
    guard: i64,
) -> Result<SigIter> {
    if low > high {
        return Err(Error::Domain(format!("empty range [{low}, {high}]")));
    }
    if (n as i64).saturating_mul(high - low) > guard {
        return Err(Error::Guard(format!(
            "enumeration of n={n} over [{low}, {high}] exceeds guard {guard}"
        )));
    }
    Ok(SigIter {
        cur: Some(vec![high; n]),
        low,
        size,
    })
}

/// All signatures `σ` with `lo ⊂ σ ⊂ hi` (equal lengths), lexicographically decreasing.
pub fn between(lo: &Signature, hi: &Signature) -> Result<Vec<Signature>> {
    if lo.len() != hi.len() {
        return Err(Error::Dimension(format!("{lo} and {hi} differ in length")));
    }
    let n = lo.len();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(a: usize, lo: &[i64], hi: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Signature>) {
        if a == lo.len() {
            out.push(Signature(cur.clone()));
            return;
        }
        let top = if a == 0 { hi[0] } else { hi[a].min(cur[a - 1]) };
        let mut v = top;
        while v >= lo[a] {
            cur.push(v);
            rec(a + 1, lo, hi, cur, out);
            cur.pop();
            v -= 1;
        }
    }
    rec(0, lo.parts(), hi.parts(), &mut cur, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sig(v: &[i64]) -> Signature {
        Signature::new(v.to_vec()).unwrap()
    }

    #[test]
    fn stats_examples() {
        let s = sig(&[2, 2, 0]).stats();
        assert_eq!((s.size, s.weighted, s.length), (4, 2, 2));
        assert_eq!(s.mults, BTreeMap::from([(2, 2), (0, 1)]));
        let e = Signature::empty().stats();
        assert_eq!((e.size, e.weighted, e.length), (0, 0, 0));
        assert!(e.mults.is_empty());
        let n = sig(&[3, 1, -1]).stats();
        assert_eq!((n.size, n.weighted), (3, -1));
        assert_eq!(n.mults, BTreeMap::from([(3, 1), (1, 1), (-1, 1)]));
    }

    #[test]
    fn interlace_examples() {
        use InterlaceKind::*;
        assert!(interlace(P, &sig(&[1]), &sig(&[2, 0])).unwrap());
        assert!(interlace(Q, &sig(&[1, 0]), &sig(&[2, 1])).unwrap());
        assert!(!interlace(Q, &sig(&[0, 0]), &sig(&[2, 2])).unwrap());
        assert!(!interlace(P, &sig(&[3]), &sig(&[2, 0])).unwrap());
        assert!(interlace(P, &sig(&[1]), &sig(&[1])).is_err());
        assert!(interlace(Q, &sig(&[1]), &sig(&[1, 0])).is_err());
    }

    #[test]
    fn transform_examples() {
        assert_eq!(sig(&[1, 0]).transform(Action::Shift(2)).unwrap(), sig(&[3, 2]));
        assert_eq!(sig(&[2, 0]).transform(Action::Negate).unwrap(), sig(&[0, -2]));
        assert_eq!(
            sig(&[3, 2]).transform(Action::Concat(&sig(&[1]), false)).unwrap(),
            sig(&[3, 2, 1])
        );
        assert!(sig(&[1]).concat(&sig(&[2]), false).is_err());
        assert_eq!(sig(&[1]).concat(&sig(&[2]), true).unwrap(), sig(&[2, 1]));
    }

    #[test]
    fn enumerate_examples() {
        let all: Vec<_> = enumerate(2, 0, 1, None).unwrap().collect();
        assert_eq!(all, vec![sig(&[1, 1]), sig(&[1, 0]), sig(&[0, 0])]);
        let s: Vec<_> = enumerate(1, 0, 3, Some(2)).unwrap().collect();
        assert_eq!(s, vec![sig(&[2])]);
        let s: Vec<_> = enumerate(3, 0, 2, Some(3)).unwrap().collect();
        assert_eq!(s, vec![sig(&[2, 1, 0]), sig(&[1, 1, 1])]);
        assert!(enumerate(0, 0, 3, None).unwrap().eq([Signature::empty()]));
        assert!(enumerate(9, 0, 8, None).is_err());
    }

    #[test]
    fn parse_and_serde() {
        assert_eq!("3,1,0".parse::<Signature>().unwrap(), sig(&[3, 1, 0]));
        assert_eq!("(2, -1)".parse::<Signature>().unwrap(), sig(&[2, -1]));
        assert!("1,2".parse::<Signature>().is_err());
        assert_eq!(serde_json::to_string(&sig(&[3, 1, 0])).unwrap(), "[3,1,0]");
        assert!(serde_json::from_str::<Signature>("[0,1]").is_err());
    }

    fn brute_interlace_p(inner: &[i64], outer: &[i64]) -> bool {
        inner
            .iter()
            .enumerate()
            .all(|(i, &m)| outer[i] >= m && m >= outer[i + 1])
    }

    #[test]
    fn interlace_matches_brute_force() {
        for n in 1..=3 {
            for outer in enumerate(n, -1, 2, None).unwrap() {
                for inner in enumerate(n - 1, -1, 2, None).unwrap() {
                    assert_eq!(
                        interlace(InterlaceKind::P, &inner, &outer).unwrap(),
                        brute_interlace_p(inner.parts(), outer.parts())
                    );
                }
            }
        }
    }

    #[test]
    fn enumerate_is_complete_and_sorted() {
        for n in 0..=3usize {
            for low in -2..=0i64 {
                for high in low..=low + 4 {
                    let got: Vec<_> = enumerate(n, low, high, None).unwrap().collect();
                    let mut brute = Vec::new();
                    let k = (high - low + 1) as usize;
                    for code in 0..k.pow(n as u32) {
                        let mut v = Vec::new();
                        let mut c = code;
                        for _ in 0..n {
                            v.push(low + (c % k) as i64);
                            c /= k;
                        }
                        if let Ok(s) = Signature::new(v) {
                            brute.push(s);
                        }
                    }
                    brute.sort();
                    brute.reverse();
                    assert_eq!(got, brute);
                }
            }
        }
    }

    #[test]
    fn between_boxes() {
        let got = between(&sig(&[0, 0]), &sig(&[2, 1])).unwrap();
        assert_eq!(got, vec![sig(&[2, 1]), sig(&[2, 0]), sig(&[1, 1]), sig(&[1, 0]), sig(&[0, 0])]);
        assert!(between(&sig(&[3, 0]), &sig(&[2, 1])).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn shift_size(v in prop::collection::vec(-5i64..5, 0..=4), d in -3i64..=3) {
            let s = Signature::sorted(v);
            prop_assert_eq!(s.shift(d).size(), s.size() + d * s.len() as i64);
        }
    }
}
