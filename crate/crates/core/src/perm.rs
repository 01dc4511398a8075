//! Permutations of `{1, ..., n}` for `n <= 16`.
//!
//! Composition is a right action throughout the crate: `p.then(&q)` maps a
//! point `i` to `q(p(i))`, so `(i)(pq) = ((i)p)q`. Conjugation follows the
//! same convention, `p^g = g^-1 p g`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 16;

/// Largest degree for which exhaustive enumeration of `S_n` is allowed.
pub const ENUMERATION_DEGREE_LIMIT: usize = 9;

/// Largest degree for root counting (`n!` enumeration per query).
pub const ROOT_COUNT_DEGREE_LIMIT: usize = 8;

/// A permutation stored as a dense image table (0-based internally).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    n: u8,
    images: [u8; MAX_POINTS],
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!((1..=MAX_POINTS).contains(&n), "degree {n} out of range");
        let mut images = [0u8; MAX_POINTS];
        for (i, slot) in images.iter_mut().enumerate() {
            *slot = i as u8;
        }
        Permutation { n: n as u8, images }
    }

    /// Builds a permutation from a 1-based image list, `images[i-1]` being the image of `i`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let n = images.len();
        if n == 0 || n > MAX_POINTS {
            return Err(Error::Capacity(format!("degree {n} outside 1..={MAX_POINTS}")));
        }
        let mut p = Permutation::identity(n);
        let mut seen = [false; MAX_POINTS];
        for (i, &img) in images.iter().enumerate() {
            if img == 0 || img > n || seen[img - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 1..={n}")));
            }
            seen[img - 1] = true;
            p.images[i] = (img - 1) as u8;
        }
        Ok(p)
    }

    /// Builds a permutation from disjoint or overlapping cycles (1-based), multiplied left to right.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut acc = Permutation::identity(n);
        for cycle in cycles {
            let c = Permutation::cycle(n, cycle)?;
            acc = acc.then(&c);
        }
        Ok(acc)
    }

    fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        let mut p = Permutation::identity(n);
        let mut seen = [false; MAX_POINTS];
        for &pt in points {
            if pt == 0 || pt > n {
                return Err(Error::InvalidPermutation(format!("point {pt} outside 1..={n}")));
            }
            if seen[pt - 1] {
                return Err(Error::InvalidPermutation(format!("point {pt} repeated in cycle {points:?}")));
            }
            seen[pt - 1] = true;
        }
        for (k, &pt) in points.iter().enumerate() {
            let next = points[(k + 1) % points.len()];
            p.images[pt - 1] = (next - 1) as u8;
        }
        Ok(p)
    }

    /// Parses cycle notation: `"id"`, `"(2354)"`, `"(12)(345)"`, or with
    /// separators for two-digit points, `"(1,10,3)"` / `"(1 10 3)"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "1" || text == "()" {
            return Ok(Permutation::identity(n));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start();
            if rest_trim.is_empty() {
                break;
            }
            if !rest_trim.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in {text:?}")));
            }
            let close = rest_trim
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parenthesis in {text:?}")))?;
            let body = &rest_trim[1..close];
            let points: Vec<usize> = if body.contains(',') || body.contains(' ') {
                body.split(|c| c == ',' || c == ' ')
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}"))))
                    .collect::<Result<_>>()?
            } else {
                body.chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad point {c:?} in {text:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            if points.is_empty() {
                return Err(Error::Parse(format!("empty cycle in {text:?}")));
            }
            cycles.push(points);
            rest = &rest_trim[close + 1..];
        }
        let refs: Vec<&[usize]> = cycles.iter().map(|c| c.as_slice()).collect();
        Permutation::from_cycles(n, &refs)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.n as usize
    }

    /// Image of the 1-based point `i`.
    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// 1-based image table.
    pub fn images(&self) -> Vec<usize> {
        (0..self.degree()).map(|i| self.images[i] as usize + 1).collect()
    }

    /// Right-action product: first `self`, then `other`.
    #[inline]
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n, other.n);
        let mut out = *self;
        for i in 0..self.degree() {
            out.images[i] = other.images[self.images[i] as usize];
        }
        out
    }

    /// Checked product, first `self` then `other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = *self;
        for i in 0..self.degree() {
            out.images[self.images[i] as usize] = i as u8;
        }
        out
    }

    pub fn pow(&self, e: i64) -> Permutation {
        let mut base = if e < 0 { self.inverse() } else { *self };
        let mut e = e.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 self g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        g.inverse().then(self).then(g)
    }

    pub fn is_identity(&self) -> bool {
        (0..self.degree()).all(|i| self.images[i] as usize == i)
    }

    /// Disjoint cycles of length at least two, each starting at its least point (1-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; MAX_POINTS];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.images[i] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut seen = [false; MAX_POINTS];
        let mut parts = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u8;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = self.images[i] as usize;
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    /// Cycle type together with the parity flag (`true` for odd).
    pub fn cycle_type_and_parity(&self) -> (CycleType, bool) {
        let ct = self.cycle_type();
        let odd = (self.degree() - ct.parts.len()) % 2 == 1;
        (ct, odd)
    }

    pub fn is_even(&self) -> bool {
        !self.cycle_type_and_parity().1
    }

    pub fn order(&self) -> u64 {
        self.cycle_type().parts.iter().fold(1u64, |acc, &c| num_integer::lcm(acc, c as u64))
    }

    /// Fixed points (1-based).
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] as usize == i).map(|i| i + 1).collect()
    }

    /// Lexicographic rank among all permutations of the same degree.
    pub fn rank(&self) -> usize {
        let n = self.degree();
        let mut rank = 0usize;
        let mut used = 0u32;
        for i in 0..n {
            let v = self.images[i] as u32;
            let smaller = (used & ((1u32 << v) - 1)).count_ones();
            let less = v as usize - smaller as usize;
            rank = rank * (n - i) + less;
            used |= 1 << v;
        }
        rank
    }

    /// Inverse of [`Permutation::rank`].
    pub fn unrank(n: usize, mut rank: usize) -> Permutation {
        let mut digits = [0usize; MAX_POINTS];
        for i in (0..n).rev() {
            let base = n - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut avail: Vec<u8> = (0..n as u8).collect();
        let mut p = Permutation::identity(n);
        for i in 0..n {
            p.images[i] = avail.remove(digits[i]);
        }
        p
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Permutation {
        let mut p = Permutation::identity(n);
        p.images.swap(a - 1, b - 1);
        p
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        let sep = if self.degree() >= 10 { "," } else { "" };
        for c in cycles {
            let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", body.join(sep))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[S{}]", self, self.n)
    }
}

/// Descending multiset of cycle lengths, fixed points included.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CycleType {
    parts: Vec<u8>,
}

impl CycleType {
    pub fn new(mut parts: Vec<u8>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }

    pub fn parts(&self) -> &[u8] {
        &self.parts
    }

    /// Cycle lengths greater than one, e.g. `[3]` for a 3-cycle in `S_5`.
    pub fn nontrivial(&self) -> Vec<u8> {
        self.parts.iter().copied().filter(|&c| c > 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().map(|&c| c as usize).sum()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", body.join(","))
    }
}

impl FromStr for CycleType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<u8>().map_err(|_| Error::Parse(format!("bad cycle type {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(CycleType::new(parts))
    }
}

/// All permutations of degree `n` in lexicographic order of image tables.
pub fn all_permutations(n: usize) -> Result<Vec<Permutation>> {
    if n > ENUMERATION_DEGREE_LIMIT {
        return Err(Error::Capacity(format!("S_{n} exceeds the enumeration limit S_{ENUMERATION_DEGREE_LIMIT}")));
    }
    let total: usize = (1..=n).product();
    Ok((0..total).map(|r| Permutation::unrank(n, r)).collect())
}

/// Even permutations of degree `n`, lexicographic.
pub fn alternating_elements(n: usize) -> Result<Vec<Permutation>> {
    Ok(all_permutations(n)?.into_iter().filter(|p| p.is_even()).collect())
}

/// Number of `s` in `S_n` with `s^r = b`, by enumeration.
pub fn count_roots(b: &Permutation, r: u32) -> Result<u64> {
    if r == 0 {
        return Err(Error::Precondition("root order must be positive".into()));
    }
    let n = b.degree();
    if n > ROOT_COUNT_DEGREE_LIMIT {
        return Err(Error::Capacity(format!("root counting limited to n <= {ROOT_COUNT_DEGREE_LIMIT}, got {n}")));
    }
    let total: usize = (1..=n).product();
    Ok((0..total).filter(|&k| Permutation::unrank(n, k).pow(r as i64) == *b).count() as u64)
}

/// Table of root counts `l_r(b)` indexed by `b.rank()`.
pub fn root_count_table(n: usize, r: u32) -> Result<Vec<u64>> {
    if n > ROOT_COUNT_DEGREE_LIMIT {
        return Err(Error::Capacity(format!("root counting limited to n <= {ROOT_COUNT_DEGREE_LIMIT}, got {n}")));
    }
    let total: usize = (1..=n).product();
    let mut table = vec![0u64; total];
    for k in 0..total {
        table[Permutation::unrank(n, k).pow(r as i64).rank()] += 1;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Permutation {
        Permutation::parse(n, s).unwrap()
    }

    #[test]
    fn involution_and_three_cycle() {
        assert!(p(5, "(12)").then(&p(5, "(12)")).is_identity());
        assert_eq!(p(5, "(123)").then(&p(5, "(123)")), p(5, "(132)"));
    }

    #[test]
    fn right_action_convention() {
        // (12) then (23): 1 -> 2 -> 3.
        let q = p(3, "(12)").then(&p(3, "(23)"));
        assert_eq!(q.image(1), 3);
        assert_eq!(q, p(3, "(132)"));
    }

    #[test]
    fn compose_rejects_size_mismatch() {
        assert!(matches!(p(5, "(12)").compose(&p(6, "(12)")), Err(Error::SizeMismatch { .. })));
    }

    #[test]
    fn cycle_types() {
        let (ct, odd) = p(5, "(2354)").cycle_type_and_parity();
        assert_eq!(ct.parts(), &[4, 1]);
        assert!(odd);
        let (ct, odd) = Permutation::identity(5).cycle_type_and_parity();
        assert_eq!(ct.parts(), &[1, 1, 1, 1, 1]);
        assert!(!odd);
        let (ct, odd) = p(5, "(12)(345)").cycle_type_and_parity();
        assert_eq!(ct.parts(), &[3, 2]);
        assert!(odd);
    }

    #[test]
    fn conjugation() {
        assert_eq!(p(5, "(12)").conjugate_by(&p(5, "(123)")), p(5, "(23)"));
        let x = p(5, "(12)(345)");
        assert_eq!(x.conjugate_by(&Permutation::identity(5)), x);
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["id", "(2354)", "(12)(345)", "(14)(35)"] {
            assert_eq!(p(5, s).to_string(), s);
        }
        let big = p(12, "(1,10,3)(11,12)");
        assert_eq!(big.to_string(), "(1,10,3)(11,12)");
        assert_eq!(Permutation::parse(12, &big.to_string()).unwrap(), big);
        assert!(Permutation::parse(5, "(16)").is_err());
        assert!(Permutation::parse(5, "(121)").is_err());
        assert!(Permutation::parse(5, "(12").is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(count_roots(&p(5, "(12)(345)"), 1).unwrap(), 1);
        for b in all_permutations(5).unwrap().iter().filter(|b| !b.is_even()) {
            assert_eq!(count_roots(b, 2).unwrap(), 0);
        }
        assert_eq!(count_roots(&Permutation::identity(3), 2).unwrap(), 4);
        assert!(count_roots(&Permutation::identity(9), 2).is_err());
    }

    #[test]
    fn rank_unrank() {
        let all = all_permutations(5).unwrap();
        assert_eq!(all.len(), 120);
        for (k, q) in all.iter().enumerate() {
            assert_eq!(q.rank(), k);
        }
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(alternating_elements(6).unwrap().len(), 360);
    }
}
