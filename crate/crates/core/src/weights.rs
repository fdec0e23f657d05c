//! Partitions, weights of `Sp_2m` and the weight regions the diagram calculus works in.
//!
//! Dominant weights are identified with partitions of length at most `m`. All
//! arithmetic is on `i64`; construction bounds every input so that sums of
//! parts, `rho` entries and multiples of `p` stay far away from overflow.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{precondition, Error, Result};

/// Largest accepted part of a partition.
pub const MAX_PART: u32 = 1 << 24;
/// Largest accepted characteristic and rank.
pub const MAX_CONTEXT: u32 = 1 << 16;

/// A partition, stored with trailing zeros trimmed.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(join(&parts)));
        }
        if parts.first().is_some_and(|&p| p > MAX_PART) {
            return Err(Error::Overflow);
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts, `l(lambda)`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|lambda|`.
    pub fn size(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    /// `lambda_1`, zero for the empty partition.
    pub fn first(&self) -> u32 {
        self.part(0)
    }

    /// The `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Young diagram containment `self ⊆ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.len() <= other.len() && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    pub fn transpose(&self) -> Partition {
        let parts = (1..=self.first())
            .map(|k| self.parts.iter().take_while(|&&p| p >= k).count() as u32)
            .collect();
        Partition { parts }
    }

    /// The weight in `Z^m` obtained by padding with zeros.
    pub fn to_weight(&self, m: usize) -> Result<Weight> {
        if self.len() > m {
            return Err(precondition(format!("l({self}) = {} exceeds m = {m}", self.len())));
        }
        let mut entries: Vec<i64> = self.parts.iter().map(|&p| p as i64).collect();
        entries.resize(m, 0);
        Ok(Weight(entries))
    }

    /// All partitions with at most `max_len` parts and size at most `max_size`.
    pub fn enumerate(max_len: usize, max_size: u64) -> Vec<Partition> {
        fn rec(
            prefix: &mut Vec<u32>,
            cap: u32,
            remaining: u64,
            max_len: usize,
            out: &mut Vec<Partition>,
        ) {
            out.push(Partition { parts: prefix.clone() });
            if prefix.len() == max_len {
                return;
            }
            let top = cap.min(remaining.min(u32::MAX as u64) as u32);
            for part in 1..=top {
                prefix.push(part);
                rec(prefix, part, remaining - part as u64, max_len, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), MAX_PART, max_size, max_len, &mut out);
        out.sort();
        out
    }
}

fn join(parts: &[u32]) -> String {
    parts.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&join(&self.parts))
        }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.parts))
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Comma-separated weakly decreasing integers; `""` and `"0"` are the empty partition.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::Parse(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|e| match e {
            Error::Parse(_) => Error::Parse(s.to_string()),
            other => other,
        })
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl TryFrom<&[u32]> for Partition {
    type Error = Error;
    fn try_from(parts: &[u32]) -> Result<Self> {
        Partition::new(parts.to_vec())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An element of `X = Z^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, other: &Weight) -> Result<Weight> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn sub(&self, other: &Weight) -> Result<Weight> {
        self.zip_with(other, i64::checked_sub)
    }

    fn zip_with(&self, other: &Weight, f: impl Fn(i64, i64) -> Option<i64>) -> Result<Weight> {
        if self.rank() != other.rank() {
            return Err(precondition("weights of different rank"));
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| f(a, b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }

    /// Interprets a weakly decreasing nonnegative weight as a partition.
    pub fn to_partition(&self) -> Result<Partition> {
        if self.0.iter().any(|&x| x < 0 || x > MAX_PART as i64) {
            return Err(precondition(format!("{:?} is not dominant", self.0)));
        }
        Partition::new(self.0.iter().map(|&x| x as u32).collect())
            .map_err(|_| precondition(format!("{:?} is not dominant", self.0)))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Characteristic `p` and rank `m` of `Sp_2m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupContext {
    p: u32,
    m: u32,
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl GroupContext {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} must be an odd prime")));
        }
        if m == 0 {
            return Err(Error::InvalidContext("m must be positive".into()));
        }
        if p > MAX_CONTEXT || m > MAX_CONTEXT {
            return Err(Error::Overflow);
        }
        Ok(GroupContext { p, m })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub(crate) fn pi(&self) -> i64 {
        self.p as i64
    }

    pub(crate) fn mu(&self) -> usize {
        self.m as usize
    }

    /// `rho_i = m - i + 1` (1-based `i`).
    pub fn rho_at(&self, i: usize) -> i64 {
        self.m as i64 - i as i64 + 1
    }

    pub(crate) fn check_len(&self, lambda: &Partition) -> Result<()> {
        if lambda.len() > self.mu() {
            Err(precondition(format!("l({lambda}) = {} exceeds m = {}", lambda.len(), self.m)))
        } else {
            Ok(())
        }
    }

    /// `lambda + rho` as a vector of length `m`.
    pub fn shifted(&self, lambda: &Partition) -> Result<Weight> {
        lambda.to_weight(self.mu())?.add(&rho(self))
    }
}

/// `rho = (m, m-1, ..., 1)`.
pub fn rho(ctx: &GroupContext) -> Weight {
    Weight((1..=ctx.mu()).map(|i| ctx.rho_at(i)).collect())
}

/// `lambda_1 + l(lambda) - 1`, or 0 for the empty partition.
pub fn greatest_hook(lambda: &Partition) -> u64 {
    if lambda.is_empty() {
        0
    } else {
        lambda.first() as u64 + lambda.len() as u64 - 1
    }
}

/// Whether every positive `(lambda+rho)_i - l*p` occurs among the entries of `lambda+rho`.
pub fn is_p_core(lambda: &Partition, ctx: &GroupContext) -> Result<bool> {
    let v = ctx.shifted(lambda)?;
    let present: HashSet<i64> = v.entries().iter().copied().collect();
    let p = ctx.pi();
    Ok(v.entries().iter().all(|&x| {
        (1..)
            .map(|l| x - l * p)
            .take_while(|&y| y > 0)
            .all(|y| present.contains(&y))
    }))
}

fn check_s(s: u32, upper: u32, what: &str) -> Result<()> {
    if s == 0 || s > upper {
        Err(precondition(format!("s = {s} must lie in 1..={upper} ({what})")))
    } else {
        Ok(())
    }
}

/// Membership in `Λ(s)`: `l(lambda) <= s <= p - lambda_1`.
pub fn in_lambda_region(lambda: &Partition, s: u32, ctx: &GroupContext) -> Result<bool> {
    check_s(s, ctx.m.min(ctx.p), "min(m, p)")?;
    Ok(lambda.len() <= s as usize && s as u64 + lambda.first() as u64 <= ctx.p as u64)
}

/// Membership in `Λ_s`: `lambda_1 + l(lambda) <= p` and `l(lambda) <= s`.
pub fn in_lambda_m(lambda: &Partition, s: u32, ctx: &GroupContext) -> Result<bool> {
    check_s(s, ctx.m, "m")?;
    Ok(lambda.first() as u64 + lambda.len() as u64 <= ctx.p as u64 && lambda.len() <= s as usize)
}

/// Partitions of length at most `m` obtained by adding or removing one box.
pub fn supp(lambda: &Partition, ctx: &GroupContext) -> Result<BTreeSet<Partition>> {
    ctx.check_len(lambda)?;
    let parts = lambda.parts();
    let mut out = BTreeSet::new();
    for i in 0..=parts.len() {
        if i >= ctx.mu() {
            break;
        }
        if i == 0 || lambda.part(i - 1) > lambda.part(i) {
            let mut v = parts.to_vec();
            if i == v.len() {
                v.push(1);
            } else {
                v[i] += 1;
            }
            out.insert(Partition::new(v)?);
        }
    }
    for i in 0..parts.len() {
        if lambda.part(i) > lambda.part(i + 1) {
            let mut v = parts.to_vec();
            v[i] -= 1;
            out.insert(Partition::new(v)?);
        }
    }
    Ok(out)
}

/// Dominance order of the type `C_m` root lattice: `lambda - mu` is a sum of positive roots.
///
/// Decided by prefix sums of `lambda - mu` being nonnegative with an even total.
pub fn dominance_leq(mu: &Partition, lambda: &Partition, ctx: &GroupContext) -> Result<bool> {
    let diff = lambda.to_weight(ctx.mu())?.sub(&mu.to_weight(ctx.mu())?)?;
    let mut acc = 0i64;
    for &x in diff.entries() {
        acc += x;
        if acc < 0 {
            return Ok(false);
        }
    }
    Ok(acc % 2 == 0)
}
