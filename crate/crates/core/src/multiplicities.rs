//! Tilting multiplicities and decomposition numbers from orientedness of
//! cap-curl overlays, decomposition matrices, the dagger duality and the Brauer
//! algebra decomposition numbers.

use serde::Serialize;

use crate::diagrams::{arrow_diagram, cap_curl, dagger, overlay, Arrow, DiagramContext, Mode};
use crate::error::{precondition, BrauerDomainError, Error, Result};
use crate::order::{lower_set, preceq};
use crate::weights::{in_lambda_region, GroupContext, Partition};

/// `(T(lambda) : ∇(mu))`, building `c_lambda` with node-1 arrow `zero_arrow`.
pub fn tilting_mult_with(
    lambda: &Partition,
    mu: &Partition,
    ctx: &DiagramContext,
    zero_arrow: Arrow,
) -> Result<u8> {
    if !preceq(mu, lambda, ctx)? {
        return Ok(0);
    }
    let c = cap_curl(&arrow_diagram(lambda, ctx, zero_arrow)?, Mode::C);
    Ok(overlay(&c, mu)?.oriented as u8)
}

/// `(T(lambda) : ∇(mu)) = (T(lambda) : Δ(mu))`.
pub fn tilting_mult(lambda: &Partition, mu: &Partition, ctx: &DiagramContext) -> Result<u8> {
    tilting_mult_with(lambda, mu, ctx, Arrow::Down)
}

/// `[Δ(lambda) : L(mu)]`, building `co_mu` with node-1 arrow `zero_arrow`.
pub fn decomposition_number_with(
    lambda: &Partition,
    mu: &Partition,
    ctx: &DiagramContext,
    zero_arrow: Arrow,
) -> Result<u8> {
    if !preceq(mu, lambda, ctx)? {
        return Ok(0);
    }
    let co = cap_curl(&arrow_diagram(mu, ctx, zero_arrow)?, Mode::Co);
    Ok(overlay(&co, lambda)?.oriented as u8)
}

/// `[Δ(lambda) : L(mu)] = [∇(lambda) : L(mu)]`.
pub fn decomposition_number(lambda: &Partition, mu: &Partition, ctx: &DiagramContext) -> Result<u8> {
    decomposition_number_with(lambda, mu, ctx, Arrow::Down)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    /// Rows `lambda`, entries `[Δ(lambda) : L(mu)]`.
    Decomp,
    /// Rows `lambda`, entries `(T(lambda) : ∇(mu))`.
    Tilt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionMatrix {
    pub kind: MatrixKind,
    /// A lower set, largest weight first.
    pub labels: Vec<Partition>,
    pub entries: Vec<Vec<u8>>,
}

impl DecompositionMatrix {
    pub fn row(&self, lambda: &Partition) -> Option<&[u8]> {
        let i = self.labels.iter().position(|l| l == lambda)?;
        Some(&self.entries[i])
    }

    /// Labels with a nonzero entry in row `lambda`.
    pub fn support(&self, lambda: &Partition) -> Vec<Partition> {
        self.row(lambda)
            .map(|r| {
                r.iter()
                    .zip(&self.labels)
                    .filter(|(e, _)| **e != 0)
                    .map(|(_, l)| l.clone())
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// The matrix of `kind` over the lower set of `lambda`.
pub fn decomposition_matrix(
    lambda: &Partition,
    ctx: &DiagramContext,
    kind: MatrixKind,
) -> Result<DecompositionMatrix> {
    let labels = lower_set(lambda, ctx)?;
    let entry = |a: &Partition, b: &Partition| match kind {
        MatrixKind::Decomp => decomposition_number(a, b, ctx),
        MatrixKind::Tilt => tilting_mult(a, b, ctx),
    };
    let entries = labels
        .iter()
        .map(|a| labels.iter().map(|b| entry(a, b)).collect::<Result<Vec<u8>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(DecompositionMatrix { kind, labels, entries })
}

/// `[Δ(lambda) : L(mu)] == (T(mu†) : ∇(lambda†))`.
pub fn dagger_duality_check(lambda: &Partition, mu: &Partition, ctx: &DiagramContext) -> Result<bool> {
    let lhs = decomposition_number(lambda, mu, ctx)?;
    let rhs = tilting_mult(&dagger(mu, ctx)?, &dagger(lambda, ctx)?, ctx)?;
    Ok(lhs == rhs)
}

/// A Brauer algebra decomposition number with the choices that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrauerResult {
    /// `[S(mu^T) : D(lambda^T)]` for `B_r(delta)`.
    pub value: u8,
    pub p: u32,
    pub delta: i64,
    pub r: u32,
    pub m: u32,
    pub s: u32,
    pub lambda: Partition,
    pub mu: Partition,
    pub lambda_t: Partition,
    pub mu_t: Partition,
    /// Whether `mu_1 + l(mu) <= p` also holds; reported, not required.
    pub mu_hook_within_p: bool,
}

fn hook_within(lambda: &Partition, p: u32) -> bool {
    lambda.first() as u64 + lambda.len() as u64 <= p as u64
}

/// Smallest `m >= r` with `-2m = delta (mod p)`.
pub fn brauer_rank(p: u32, delta: i64, r: u32) -> u32 {
    let p = p as i64;
    let m0 = (-delta * (p + 1) / 2).rem_euclid(p);
    let r = r as i64;
    let m = if m0 >= r { m0 } else { m0 + (r - m0 + p - 1) / p * p };
    m as u32
}

fn brauer_at(lambda: &Partition, mu: &Partition, p: u32, m: u32, s: u32) -> Result<u8> {
    let ctx = DiagramContext::new(GroupContext::new(p, m)?, s)?;
    tilting_mult(lambda, mu, &ctx)
}

/// `[S(mu^T) : D(lambda^T)]` for the Brauer algebra `B_r(delta)` over a field of
/// characteristic `p`; `lambda` and `mu` are given in the symplectic labelling.
///
/// Uses the smallest admissible `m` and `s`, and checks that the next `m` and
/// the largest `s` give the same answer.
pub fn brauer_decomposition_number(
    p: u32,
    delta: i64,
    r: u32,
    lambda: &Partition,
    mu: &Partition,
) -> Result<BrauerResult> {
    GroupContext::new(p, 1)?;
    let delta = delta.rem_euclid(p as i64);
    if r == 0 {
        return Err(BrauerDomainError::NonPositiveRank.into());
    }
    let fits = |x: &Partition| x.size() <= r as u64 && (r as u64 - x.size()).is_multiple_of(2);
    if !fits(lambda) || !fits(mu) {
        return Err(BrauerDomainError::Parity.into());
    }
    if lambda.is_empty() && r.is_multiple_of(2) && delta == 0 {
        return Err(BrauerDomainError::EmptyAtZeroDelta.into());
    }
    if !hook_within(lambda, p) {
        return Err(BrauerDomainError::HookTooLarge.into());
    }
    let m = brauer_rank(p, delta, r);
    let s = (lambda.len() as u32).max(1);
    let s_max = m.min(p - lambda.first());
    let group = GroupContext::new(p, m)?;
    if !in_lambda_region(lambda, s, &group)? {
        return Err(precondition(format!("{lambda} is not in the region for s = {s}")));
    }
    let value = brauer_at(lambda, mu, p, m, s)?;
    for (m2, s2) in [(m + p, s), (m, s_max), (m + p, s_max)] {
        let other = brauer_at(lambda, mu, p, m2, s2)?;
        if other != value {
            return Err(Error::Internal(format!(
                "brauer value for ({lambda}, {mu}) depends on (m, s): ({m}, {s}) gives {value}, ({m2}, {s2}) gives {other}"
            )));
        }
    }
    Ok(BrauerResult {
        value,
        p,
        delta,
        r,
        m,
        s,
        lambda: lambda.clone(),
        mu: mu.clone(),
        lambda_t: lambda.transpose(),
        mu_t: mu.transpose(),
        mu_hook_within_p: hook_within(mu, p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn dctx(p: u32, m: u32, s: u32) -> DiagramContext {
        DiagramContext::new(GroupContext::new(p, m).unwrap(), s).unwrap()
    }

    #[test]
    fn tilting_examples() {
        let c = dctx(11, 7, 5);
        let l = pt("6,6,6,3,2");
        for (mu, v) in [
            ("6,6,6,3,2", 1),
            ("6,6,6,2,1", 1),
            ("6,5,5,3,2", 1),
            ("6,5,5,2,1", 1),
            ("5,5,4,3,2", 0),
            ("5,5,4,2,1", 0),
            ("4,4,4,3,2", 0),
            ("4,4,4,2,1", 0),
        ] {
            assert_eq!(tilting_mult(&l, &pt(mu), &c).unwrap(), v, "{mu}");
            assert_eq!(tilting_mult_with(&l, &pt(mu), &c, Arrow::Up).unwrap(), v, "{mu}");
        }
    }

    #[test]
    fn decomposition_examples() {
        let c = dctx(11, 7, 5);
        assert_eq!(decomposition_number(&pt("5,5,4,3,2"), &pt("4,4,4,2,1"), &c).unwrap(), 1);
        assert_eq!(decomposition_number(&pt("6,6,6,3,2"), &pt("4,4,4,2,1"), &c).unwrap(), 0);
        assert_eq!(decomposition_number(&pt("6,6,6,3,2"), &pt("6,6,6,3,2"), &c).unwrap(), 1);
        let c = dctx(11, 5, 4);
        assert_eq!(decomposition_number(&pt("7,7,6,1"), &pt("6,6,5"), &c).unwrap(), 1);
    }

    #[test]
    fn matrix_examples() {
        let c = dctx(11, 7, 5);
        let t = decomposition_matrix(&pt("6,6,6,3,2"), &c, MatrixKind::Tilt).unwrap();
        assert_eq!(
            t.support(&pt("6,6,6,3,2")),
            vec![pt("6,6,6,3,2"), pt("6,6,6,2,1"), pt("6,5,5,3,2"), pt("6,5,5,2,1")]
        );
        for (i, row) in t.entries.iter().enumerate() {
            assert_eq!(row[i], 1);
        }

        let d = decomposition_matrix(&pt("7,7,6,1"), &dctx(11, 5, 4), MatrixKind::Decomp).unwrap();
        let mut support = d.support(&pt("7,7,6,1"));
        support.sort();
        assert_eq!(support, vec![pt("6,6,5"), pt("6,6,6,1"), pt("7,7,5"), pt("7,7,6,1")]);

        let d = decomposition_matrix(&pt("6,6,5"), &dctx(11, 5, 3), MatrixKind::Decomp).unwrap();
        assert_eq!(d.entries, vec![vec![1]]);
    }

    #[test]
    fn duality_example() {
        let c = dctx(11, 7, 5);
        assert!(dagger_duality_check(&pt("5,5,4,3,2"), &pt("4,4,4,2,1"), &c).unwrap());
        assert_eq!(dagger(&pt("5,5,4,3,2"), &c).unwrap(), pt("6,5,5,2,1"));
        assert!(dagger_duality_check(&pt("6,6,6,3,2"), &pt("6,6,6,3,2"), &c).unwrap());
    }

    #[test]
    fn brauer_rank_choice() {
        assert_eq!(brauer_rank(5, 1, 2), 2);
        assert_eq!(brauer_rank(5, 1, 3), 7);
        assert_eq!(brauer_rank(5, 0, 2), 5);
        assert_eq!(brauer_rank(7, 3, 1), 2);
        for p in [3u32, 5, 7, 11] {
            for delta in 0..p as i64 {
                for r in 1..20 {
                    let m = brauer_rank(p, delta, r);
                    assert!(m >= r && m < r + p);
                    assert_eq!((2 * m as i64 + delta).rem_euclid(p as i64), 0);
                }
            }
        }
    }

    #[test]
    fn brauer_examples() {
        let b = brauer_decomposition_number(5, 1, 2, &pt("1,1"), &Partition::empty()).unwrap();
        assert_eq!((b.value, b.m, b.s), (0, 2, 2));
        assert_eq!(b.lambda_t, pt("2"));
        assert!(b.mu_hook_within_p);

        let b = brauer_decomposition_number(5, 0, 2, &pt("1,1"), &Partition::empty()).unwrap();
        assert_eq!((b.value, b.m), (1, 5));

        let b = brauer_decomposition_number(7, 2, 4, &pt("2,1,1"), &pt("2,1,1")).unwrap();
        assert_eq!(b.value, 1);

        let e = |r, l: &str, m: &str, d| {
            brauer_decomposition_number(5, d, r, &pt(l), &pt(m)).unwrap_err()
        };
        assert_eq!(e(2, "0", "0", 0), Error::Brauer(BrauerDomainError::EmptyAtZeroDelta));
        assert_eq!(e(3, "1,1", "0", 1), Error::Brauer(BrauerDomainError::Parity));
        assert_eq!(e(6, "4,2", "0", 1), Error::Brauer(BrauerDomainError::HookTooLarge));
        assert_eq!(e(0, "0", "0", 1), Error::Brauer(BrauerDomainError::NonPositiveRank));
    }
}
