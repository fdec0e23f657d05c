//! Formal Weyl characters: affine reflections, the dot action, normalization of
//! `chi(nu)` for arbitrary `nu`, and the unitriangular change of basis between
//! Weyl characters and irreducible characters.
//!
//! Coefficients are generic over any exact signed ring implementing
//! [`Coefficient`]; `i64` and `BigInt` are provided.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::weights::{rho, GroupContext, Partition, Weight};

/// A positive root of type `C_m`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootRef {
    /// `eps_i - eps_j`, `i < j`
    Minus(usize, usize),
    /// `eps_i + eps_j`, `i < j`
    Plus(usize, usize),
    /// `2 eps_i`
    Double(usize),
}

impl RootRef {
    pub fn minus(i: usize, j: usize) -> Self {
        assert!(0 < i && i < j, "invalid root indices");
        RootRef::Minus(i, j)
    }

    pub fn plus(i: usize, j: usize) -> Self {
        assert!(0 < i && i < j, "invalid root indices");
        RootRef::Plus(i, j)
    }

    pub fn double(i: usize) -> Self {
        assert!(i > 0, "invalid root index");
        RootRef::Double(i)
    }

    /// All positive roots for rank `m`.
    pub fn positive_roots(m: usize) -> Vec<RootRef> {
        let mut out = Vec::with_capacity(m * m);
        for i in 1..=m {
            for j in i + 1..=m {
                out.push(RootRef::Minus(i, j));
                out.push(RootRef::Plus(i, j));
            }
            out.push(RootRef::Double(i));
        }
        out
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RootRef::Minus(..) => "minus",
            RootRef::Plus(..) => "plus",
            RootRef::Double(_) => "double",
        }
    }

    /// `(i, j)`, with `j = i` for `2 eps_i`.
    pub fn indices(&self) -> (usize, usize) {
        match *self {
            RootRef::Minus(i, j) | RootRef::Plus(i, j) => (i, j),
            RootRef::Double(i) => (i, i),
        }
    }

    fn check(&self, rank: usize) -> Result<()> {
        let (i, j) = self.indices();
        if i == 0 || j > rank || (!matches!(self, RootRef::Double(_)) && i >= j) {
            Err(precondition(format!("root {self} invalid for rank {rank}")))
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for RootRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootRef::Minus(i, j) => write!(f, "e{i}-e{j}"),
            RootRef::Plus(i, j) => write!(f, "e{i}+e{j}"),
            RootRef::Double(i) => write!(f, "2e{i}"),
        }
    }
}

/// `<v, alpha^vee>`.
pub fn pairing(v: &Weight, alpha: RootRef) -> Result<i64> {
    alpha.check(v.rank())?;
    let e = v.entries();
    Ok(match alpha {
        RootRef::Minus(i, j) => e[i - 1] - e[j - 1],
        RootRef::Plus(i, j) => e[i - 1] + e[j - 1],
        RootRef::Double(i) => e[i - 1],
    })
}

/// The affine reflection `s_{alpha,l}(x) = x - a*alpha`, `a = <x, alpha^vee> - l*p`.
pub fn reflect(x: &Weight, alpha: RootRef, l: i64, p: i64) -> Result<Weight> {
    let a = pairing(x, alpha)?
        .checked_sub(l.checked_mul(p).ok_or(Error::Overflow)?)
        .ok_or(Error::Overflow)?;
    let mut out = x.entries().to_vec();
    match alpha {
        RootRef::Minus(i, j) => {
            out[i - 1] -= a;
            out[j - 1] += a;
        }
        RootRef::Plus(i, j) => {
            out[i - 1] -= a;
            out[j - 1] -= a;
        }
        RootRef::Double(i) => out[i - 1] -= 2 * a,
    }
    Ok(Weight(out))
}

/// The dot action `s_{alpha,l} . nu = s_{alpha,l}(nu + rho) - rho`.
pub fn reflect_dot(nu: &Weight, alpha: RootRef, l: i64, ctx: &GroupContext) -> Result<Weight> {
    let r = rho(ctx);
    reflect(&nu.add(&r)?, alpha, l, ctx.pi())?.sub(&r)
}

/// A nonzero Weyl character `sign * chi(partition)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPartition {
    pub sign: i8,
    pub partition: Partition,
}

/// Normalizes a `rho`-shifted vector `v = nu + rho`; `None` when `chi(nu) = 0`.
pub fn chi_normalize_shifted(v: &Weight, ctx: &GroupContext) -> Result<Option<SignedPartition>> {
    if v.rank() != ctx.mu() {
        return Err(precondition("weight rank differs from m"));
    }
    let abs: Vec<i64> = v.entries().iter().map(|x| x.abs()).collect();
    if abs.contains(&0) {
        return Ok(None);
    }
    let distinct: BTreeSet<i64> = abs.iter().copied().collect();
    if distinct.len() != abs.len() {
        return Ok(None);
    }
    let negatives = v.entries().iter().filter(|&&x| x < 0).count();
    let mut inversions = 0usize;
    for i in 0..abs.len() {
        for j in i + 1..abs.len() {
            if abs[i] < abs[j] {
                inversions += 1;
            }
        }
    }
    let sign = if (negatives + inversions).is_multiple_of(2) { 1 } else { -1 };
    let mut sorted = abs;
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let partition = Weight(sorted).sub(&rho(ctx))?.to_partition()?;
    Ok(Some(SignedPartition { sign, partition }))
}

/// `chi(nu) = det(w) chi(w . nu)` with `w . nu` dominant, or `None` when `chi(nu) = 0`.
pub fn chi_normalize(nu: &Weight, ctx: &GroupContext) -> Result<Option<SignedPartition>> {
    chi_normalize_shifted(&nu.add(&rho(ctx))?, ctx)
}

/// Exact signed coefficient ring for formal characters.
pub trait Coefficient:
    Clone
    + Ord
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Signed
    + CheckedAdd
    + CheckedMul
    + From<i32>
    + Send
    + Sync
{
}

impl<T> Coefficient for T where
    T: Clone
        + Ord
        + fmt::Debug
        + fmt::Display
        + Zero
        + One
        + Signed
        + CheckedAdd
        + CheckedMul
        + From<i32>
        + Send
        + Sync
{
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Weyl characters `chi(lambda)`.
    #[serde(rename = "chi")]
    Chi,
    /// Irreducible characters `ch L(lambda)`.
    #[serde(rename = "L")]
    L,
}

/// A finite integer combination of dominant weights in one basis.
#[derive(Clone, PartialEq, Eq)]
pub struct FormalCharacter<C> {
    basis: Basis,
    terms: BTreeMap<Partition, C>,
}

impl<C: Coefficient> FormalCharacter<C> {
    pub fn zero(basis: Basis) -> Self {
        FormalCharacter { basis, terms: BTreeMap::new() }
    }

    pub fn single(basis: Basis, lambda: Partition, coeff: C) -> Self {
        let mut c = Self::zero(basis);
        c.add_term(lambda, coeff).expect("single term cannot overflow");
        c
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lambda: &Partition) -> C {
        self.terms.get(lambda).cloned().unwrap_or_else(C::zero)
    }

    /// Terms in lexicographic order of the weight.
    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, lambda: Partition, coeff: C) -> Result<()> {
        if coeff.is_zero() {
            return Ok(());
        }
        let new = match self.terms.get(&lambda) {
            Some(old) => old.checked_add(&coeff).ok_or(Error::Overflow)?,
            None => coeff,
        };
        if new.is_zero() {
            self.terms.remove(&lambda);
        } else {
            self.terms.insert(lambda, new);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, by: &C) -> Result<Self> {
        let mut out = Self::zero(self.basis);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.checked_mul(by).ok_or(Error::Overflow)?)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        FormalCharacter {
            basis: self.basis,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// True when every coefficient is nonnegative.
    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

impl<C: Coefficient> fmt::Display for FormalCharacter<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let name = match self.basis {
            Basis::Chi => "chi",
            Basis::L => "L",
        };
        for (n, (k, v)) in self.terms.iter().enumerate() {
            let mag = v.abs();
            match (n, v.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if mag.is_one() {
                write!(f, "{name}({k})")?;
            } else {
                write!(f, "{mag}{name}({k})")?;
            }
        }
        Ok(())
    }
}

impl<C: Coefficient> fmt::Debug for FormalCharacter<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson<C> {
    weight: Partition,
    coeff: C,
}

#[derive(Serialize, Deserialize)]
struct CharacterJson<C> {
    basis: Basis,
    terms: Vec<TermJson<C>>,
}

impl<C: Coefficient + Serialize> Serialize for FormalCharacter<C> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CharacterJson {
            basis: self.basis,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| TermJson { weight: k.clone(), coeff: v.clone() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de, C: Coefficient + Deserialize<'de>> Deserialize<'de> for FormalCharacter<C> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::<C>::deserialize(d)?;
        let mut out = FormalCharacter::zero(raw.basis);
        for t in raw.terms {
            out.add_term(t.weight, t.coeff).map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

/// Off-diagonal decomposition numbers `mu -> [Delta(lambda) : L(mu)]` of one row.
/// The diagonal entry is implicitly 1.
pub type DecompositionRow = BTreeMap<Partition, u8>;

/// Source of decomposition-matrix rows.
pub trait RowProvider {
    fn row(&self, lambda: &Partition) -> Option<DecompositionRow>;
}

impl RowProvider for BTreeMap<Partition, DecompositionRow> {
    fn row(&self, lambda: &Partition) -> Option<DecompositionRow> {
        self.get(lambda).cloned()
    }
}

impl RowProvider for HashMap<Partition, DecompositionRow> {
    fn row(&self, lambda: &Partition) -> Option<DecompositionRow> {
        self.get(lambda).cloned()
    }
}

fn off_diagonal(lambda: &Partition, rows: &impl RowProvider) -> Result<DecompositionRow> {
    let mut row = rows.row(lambda).ok_or_else(|| Error::UnresolvedLabel(lambda.clone()))?;
    match row.remove(lambda) {
        None | Some(1) => {}
        Some(d) => {
            return Err(precondition(format!("diagonal entry {d} for {lambda} is not 1")));
        }
    }
    row.retain(|_, d| *d != 0);
    Ok(row)
}

/// Rewrites a character in the Weyl basis into the irreducible basis using
/// `chi(lambda) = sum_mu d_{lambda mu} ch L(mu)`.
pub fn to_l_basis<C: Coefficient>(
    c: &FormalCharacter<C>,
    rows: &impl RowProvider,
) -> Result<FormalCharacter<C>> {
    if c.basis != Basis::Chi {
        return Err(Error::BasisMismatch);
    }
    let mut out = FormalCharacter::zero(Basis::L);
    for (lambda, coeff) in c.iter() {
        out.add_term(lambda.clone(), coeff.clone())?;
        for (mu, d) in off_diagonal(lambda, rows)? {
            let d = C::from(d as i32);
            out.add_term(mu, coeff.checked_mul(&d).ok_or(Error::Overflow)?)?;
        }
    }
    Ok(out)
}

/// Inverse of [`to_l_basis`] by unitriangular elimination, largest weight first.
pub fn from_l_basis<C: Coefficient>(
    c: &FormalCharacter<C>,
    rows: &impl RowProvider,
) -> Result<FormalCharacter<C>> {
    if c.basis != Basis::L {
        return Err(Error::BasisMismatch);
    }
    let mut pending = c.terms.clone();
    let mut done = BTreeSet::new();
    let mut out = FormalCharacter::zero(Basis::Chi);
    while let Some(top) = pending.keys().max_by(|a, b| (a.size(), *a).cmp(&(b.size(), *b))) {
        let top = top.clone();
        if !done.insert(top.clone()) {
            return Err(precondition(format!("rows are not unitriangular at {top}")));
        }
        let coeff = pending.remove(&top).expect("key present");
        out.add_term(top.clone(), coeff.clone())?;
        for (mu, d) in off_diagonal(&top, rows)? {
            let delta = -coeff.checked_mul(&C::from(d as i32)).ok_or(Error::Overflow)?;
            let entry = pending.entry(mu.clone()).or_insert_with(C::zero);
            *entry = entry.checked_add(&delta).ok_or(Error::Overflow)?;
            if entry.is_zero() {
                pending.remove(&mu);
            }
        }
    }
    Ok(out)
}

/// Convenience alias for arbitrary-precision coefficients.
pub type BigCharacter = FormalCharacter<BigInt>;
