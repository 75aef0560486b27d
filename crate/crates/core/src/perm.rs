//! Permutations of `{1..n}` with cycle-notation parsing and printing.
//!
//! Points are stored 0-based. The 1-based labels of cycle notation exist only
//! at the parse/print boundary.
//!
//! Products act on the right: `p.mul(&q)` first applies `p`, then `q`, so
//! `x^(pq) = (x^p)^q`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{ParsePermError, ParsePermErrorKind, PermError};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 1 << 20;

/// A permutation stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(n));
        }
        let mut seen = alloc::vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(PermError::NotABijection);
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from 1-based images, as printed in the literature.
    pub fn from_images_one_based(images: &[u32]) -> Result<Self, PermError> {
        if images.iter().any(|&x| x == 0) {
            return Err(PermError::NotABijection);
        }
        Self::from_images(images.iter().map(|&x| x - 1).collect())
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// 1-based image table.
    pub fn images_one_based(&self) -> Vec<u32> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    #[inline]
    pub fn image(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` followed by `other`.
    pub fn mul(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    /// In-place `self := self * other`.
    pub fn mul_assign(&mut self, other: &Permutation) {
        for x in self.images.iter_mut() {
            *x = other.images[*x as usize];
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = alloc::vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self^k` for a signed exponent.
    pub fn pow(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc.mul_assign(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    /// `g^-1 * self * g`, i.e. the point relabelling of `self` by `g`.
    pub fn conjugate_by(&self, g: &Permutation) -> Permutation {
        let mut images = alloc::vec![0u32; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[x as usize];
        }
        Permutation { images }
    }

    /// Commutator `self^-1 other^-1 self other`.
    pub fn commutator(&self, other: &Permutation) -> Permutation {
        self.inverse().mul(&other.inverse()).mul(self).mul(other)
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| other.images[x as usize] == self.images[other.images[i] as usize])
    }

    /// Disjoint cycles of length at least two, each starting at its smallest
    /// point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = alloc::vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start as u32;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cycle.push(x);
                x = self.images[x as usize];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Sorted multiset of cycle lengths including fixed points.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(core::iter::repeat(1).take(self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| lcm(acc, c.len() as u64))
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    pub fn moved_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter(|(i, &x)| *i as u32 != x)
            .map(|(i, _)| i as u32)
    }

    /// Canonical cycle notation with 1-based points.
    pub fn to_cycle_string(&self) -> String {
        use core::fmt::Write;
        let cycles = self.cycles();
        if cycles.is_empty() {
            return String::from("()");
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", x + 1);
            }
            s.push(')');
        }
        s
    }

    /// Places `self` on points `offset..offset+degree` of a larger set.
    pub fn embed_shifted(&self, offset: usize, degree: usize) -> Permutation {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (i, &x) in self.images.iter().enumerate() {
            images[offset + i] = offset as u32 + x;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.to_cycle_string(), self.degree())
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Parses a product of disjoint cycles over `{1..degree}`.
///
/// Points may be separated by spaces or commas; `()` is the identity.
pub fn parse_perm(text: &str, degree: usize) -> Result<Permutation, ParsePermError> {
    if degree > MAX_DEGREE {
        return Err(ParsePermError::new(0, ParsePermErrorKind::DegreeTooLarge));
    }
    let bytes = text.as_bytes();
    let mut images: Vec<u32> = (0..degree as u32).collect();
    let mut used = alloc::vec![false; degree];
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(ParsePermError::new(pos, ParsePermErrorKind::Empty));
    }
    while pos < bytes.len() {
        if bytes[pos] != b'(' {
            return Err(ParsePermError::new(pos, ParsePermErrorKind::ExpectedOpenParen));
        }
        pos += 1;
        let mut cycle: Vec<u32> = Vec::new();
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(ParsePermError::new(pos, ParsePermErrorKind::UnclosedCycle));
            }
            match bytes[pos] {
                b')' => {
                    pos += 1;
                    break;
                }
                b',' if !cycle.is_empty() => {
                    pos += 1;
                }
                b'0'..=b'9' => {
                    let start = pos;
                    let mut value: u64 = 0;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        value = value.saturating_mul(10).saturating_add((bytes[pos] - b'0') as u64);
                        pos += 1;
                    }
                    if value == 0 || value > degree as u64 {
                        return Err(ParsePermError::new(
                            start,
                            ParsePermErrorKind::PointOutOfRange,
                        ));
                    }
                    let p = (value - 1) as u32;
                    if used[p as usize] {
                        return Err(ParsePermError::new(start, ParsePermErrorKind::RepeatedPoint));
                    }
                    used[p as usize] = true;
                    cycle.push(p);
                }
                _ => {
                    return Err(ParsePermError::new(pos, ParsePermErrorKind::UnexpectedChar));
                }
            }
        }
        for k in 0..cycle.len() {
            images[cycle[k] as usize] = cycle[(k + 1) % cycle.len()];
        }
        skip_ws(&mut pos);
    }
    Ok(Permutation::from_images_unchecked(images))
}
