//! The Jantzen sum formula for `Sp_2m`: the full sum over affine reflections,
//! the reduced sum that survives for p-cores, the cancellation between
//! `eps_i + eps_j` and `2 eps_i` contributions, and a recursive
//! decomposition-number oracle built on top of it.

use std::collections::{BTreeSet, HashMap};
use std::sync::RwLock;

use crate::characters::{
    chi_normalize_shifted, pairing, reflect, to_l_basis, Basis, DecompositionRow,
    FormalCharacter, RootRef, RowProvider,
};
use crate::error::{precondition, Error, Result};
use crate::weights::{is_p_core, GroupContext, Partition, Weight};

/// One nonzero term `valuation * sign * chi(target)` of the sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JsfTerm {
    pub root: RootRef,
    pub l: i64,
    /// `<lambda + rho, root^vee> - l*p`
    pub a: i64,
    /// `nu_p(l*p)`
    pub valuation: u32,
    pub sign: i8,
    pub target: Partition,
}

impl JsfTerm {
    pub fn coefficient(&self) -> i64 {
        self.sign as i64 * self.valuation as i64
    }
}

fn valuation(l: i64, p: i64) -> u32 {
    let mut v = 1;
    let mut l = l;
    while l % p == 0 {
        l /= p;
        v += 1;
    }
    v
}

/// Evaluates the term for `(root, l)` on the shifted weight `x = lambda + rho`.
fn term_at(x: &Weight, root: RootRef, l: i64, ctx: &GroupContext) -> Result<Option<JsfTerm>> {
    let a = pairing(x, root)? - l * ctx.pi();
    let image = reflect(x, root, l, ctx.pi())?;
    Ok(chi_normalize_shifted(&image, ctx)?.map(|n| JsfTerm {
        root,
        l,
        a,
        valuation: valuation(l, ctx.pi()),
        sign: n.sign,
        target: n.partition,
    }))
}

/// All `(l, a)` with `l >= 1` and `a = pairing - l*p >= 1`.
fn admissible_l(pair: i64, p: i64) -> impl Iterator<Item = (i64, i64)> {
    (1..).map(move |l| (l, pair - l * p)).take_while(|&(_, a)| a > 0)
}

/// Every nonzero term of the full sum, over all positive roots.
pub fn raw_jsf(lambda: &Partition, ctx: &GroupContext) -> Result<Vec<JsfTerm>> {
    let x = ctx.shifted(lambda)?;
    let mut out = Vec::new();
    for root in RootRef::positive_roots(ctx.mu()) {
        for (l, _) in admissible_l(pairing(&x, root)?, ctx.pi()) {
            if let Some(t) = term_at(&x, root, l, ctx)? {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Sums a list of terms into a Weyl-basis character.
pub fn collect_terms<'a>(
    terms: impl IntoIterator<Item = &'a JsfTerm>,
) -> Result<FormalCharacter<i64>> {
    let mut c = FormalCharacter::zero(Basis::Chi);
    for t in terms {
        c.add_term(t.target.clone(), t.coefficient())?;
    }
    Ok(c)
}

/// The right-hand side of the Jantzen sum formula, collected in the Weyl basis.
pub fn full_jsf(lambda: &Partition, ctx: &GroupContext) -> Result<FormalCharacter<i64>> {
    collect_terms(&raw_jsf(lambda, ctx)?)
}

/// Nonzero `eps_i + eps_j` contributions with `i < j <= l(lambda)`, without the
/// `(lambda+rho)_j - a > 0` filter.
pub fn plus_contributions(lambda: &Partition, ctx: &GroupContext) -> Result<Vec<JsfTerm>> {
    ctx.check_len(lambda)?;
    let x = ctx.shifted(lambda)?;
    let len = lambda.len();
    let mut out = Vec::new();
    for i in 1..=len {
        for j in i + 1..=len {
            let root = RootRef::Plus(i, j);
            for (l, _) in admissible_l(pairing(&x, root)?, ctx.pi()) {
                if let Some(t) = term_at(&x, root, l, ctx)? {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

fn require_p_core(lambda: &Partition, ctx: &GroupContext) -> Result<()> {
    if is_p_core(lambda, ctx)? {
        Ok(())
    } else {
        Err(precondition(format!("{lambda} is not a {}-core", ctx.p())))
    }
}

/// The reduced sum: surviving `eps_i + eps_j` terms, `i < j <= l(lambda)`,
/// `(lambda+rho)_j - a > 0`. Targets are checked to be distinct and strictly
/// contained in `lambda`.
pub fn reduced_jsf(lambda: &Partition, ctx: &GroupContext) -> Result<Vec<JsfTerm>> {
    require_p_core(lambda, ctx)?;
    let x = ctx.shifted(lambda)?;
    let terms: Vec<JsfTerm> = plus_contributions(lambda, ctx)?
        .into_iter()
        .filter(|t| {
            let (_, j) = t.root.indices();
            x.entries()[j - 1] - t.a > 0
        })
        .collect();
    let mut seen = BTreeSet::new();
    for t in &terms {
        let image = reflect(&x, t.root, t.l, ctx.pi())?;
        if image.entries().iter().any(|&v| v <= 0) {
            return Err(Error::Internal(format!(
                "reduced term {} l={} of {lambda} has a non-positive image",
                t.root, t.l
            )));
        }
        if !(t.target.is_contained_in(lambda) && t.target != *lambda) {
            return Err(Error::Internal(format!("target {} not strictly inside {lambda}", t.target)));
        }
        if !seen.insert(t.target.clone()) {
            return Err(Error::Internal(format!("repeated reduced target {}", t.target)));
        }
    }
    Ok(terms)
}

/// Checks that every nonzero `eps_i + eps_j` contribution (`i < j <= l(lambda)`)
/// has `(lambda+rho)_j - a > 0` and `a < p - 1`. Requires `lambda_1 + l(lambda) <= p`.
pub fn check_linkage_bounds(lambda: &Partition, ctx: &GroupContext) -> Result<()> {
    if lambda.first() as u64 + lambda.len() as u64 > ctx.p() as u64 {
        return Err(precondition(format!("{lambda} is outside lambda_1 + l <= p")));
    }
    let x = ctx.shifted(lambda)?;
    for t in plus_contributions(lambda, ctx)? {
        let (_, j) = t.root.indices();
        if x.entries()[j - 1] - t.a <= 0 || t.a >= ctx.pi() - 1 {
            return Err(Error::Internal(format!(
                "contribution {} l={} a={} of {lambda} violates the linkage bounds",
                t.root, t.l, t.a
            )));
        }
    }
    Ok(())
}

/// A matched pair `(eps_i + eps_j, l) <-> (2 eps_i, l)` whose terms cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationPair {
    pub plus: RootRef,
    pub l: i64,
    pub double: RootRef,
}

/// Matches the cancelling `eps_i + eps_j` terms with `2 eps_i` terms and checks
/// that all `eps_i - eps_j` contributions vanish.
pub fn cancellation_pairs(lambda: &Partition, ctx: &GroupContext) -> Result<Vec<CancellationPair>> {
    require_p_core(lambda, ctx)?;
    let x = ctx.shifted(lambda)?;
    let m = ctx.mu();
    let mut s1 = Vec::new();
    let mut s2 = HashMap::new();
    for root in RootRef::positive_roots(m) {
        for (l, a) in admissible_l(pairing(&x, root)?, ctx.pi()) {
            let term = term_at(&x, root, l, ctx)?;
            match (root, term) {
                (RootRef::Minus(..), Some(t)) => {
                    return Err(Error::Internal(format!(
                        "{} l={} of {lambda} contributes {:?}",
                        root, l, t.target
                    )));
                }
                (RootRef::Plus(_, j), Some(t)) if x.entries()[j - 1] - a < 0 => s1.push(t),
                (RootRef::Double(i), Some(t)) => {
                    s2.insert((i, l), t);
                }
                _ => {}
            }
        }
    }
    let mut pairs = Vec::with_capacity(s1.len());
    for t in &s1 {
        let (i, _) = t.root.indices();
        let partner = s2.remove(&(i, t.l)).ok_or_else(|| {
            Error::Internal(format!("{} l={} of {lambda} has no 2e{i} partner", t.root, t.l))
        })?;
        if partner.target != t.target || partner.sign != -t.sign || partner.valuation != t.valuation {
            return Err(Error::Internal(format!(
                "{} l={} and 2e{i} do not cancel for {lambda}",
                t.root, t.l
            )));
        }
        pairs.push(CancellationPair { plus: t.root, l: t.l, double: RootRef::Double(i) });
    }
    if let Some(((i, l), _)) = s2.into_iter().next() {
        return Err(Error::Internal(format!("2e{i} l={l} of {lambda} is unmatched")));
    }
    Ok(pairs)
}

/// Distinct `l` values occurring among a list of terms.
pub fn distinct_l_values(terms: &[JsfTerm]) -> BTreeSet<i64> {
    terms.iter().map(|t| t.l).collect()
}

/// Decomposition numbers from the reduced sum, memoized per weight.
///
/// A composition factor `L(mu)`, `mu != lambda`, is recorded exactly when its
/// coefficient in the irreducible expansion of the reduced sum is positive.
/// Negative coefficients abort the computation.
///
/// The store is safe to share between threads; recomputing a stored row must
/// give the same answer.
#[derive(Debug)]
pub struct DecompositionOracle {
    ctx: GroupContext,
    rows: RwLock<HashMap<Partition, DecompositionRow>>,
}

impl DecompositionOracle {
    pub fn new(ctx: GroupContext) -> Self {
        DecompositionOracle { ctx, rows: RwLock::new(HashMap::new()) }
    }

    pub fn context(&self) -> &GroupContext {
        &self.ctx
    }

    pub fn cached(&self) -> usize {
        self.rows.read().expect("oracle lock poisoned").len()
    }

    /// The reduced sum of `lambda` rewritten in the irreducible basis.
    pub fn l_expansion(&self, lambda: &Partition) -> Result<FormalCharacter<i64>> {
        let terms = reduced_jsf(lambda, &self.ctx)?;
        for t in &terms {
            self.row(&t.target)?;
        }
        to_l_basis(&collect_terms(&terms)?, self)
    }

    /// Off-diagonal support of row `lambda`; requires `lambda_1 + l(lambda) <= p`.
    pub fn row(&self, lambda: &Partition) -> Result<DecompositionRow> {
        if let Some(r) = self.rows.read().expect("oracle lock poisoned").get(lambda) {
            return Ok(r.clone());
        }
        self.ctx.check_len(lambda)?;
        if lambda.first() as u64 + lambda.len() as u64 > self.ctx.p() as u64 {
            return Err(precondition(format!(
                "oracle needs lambda_1 + l(lambda) <= p, got {lambda}"
            )));
        }
        let expansion = self.l_expansion(lambda)?;
        if !expansion.is_effective() {
            return Err(Error::OracleInconsistency(format!(
                "negative irreducible coefficient in the sum for {lambda}: {expansion}"
            )));
        }
        let row: DecompositionRow = expansion.iter().map(|(mu, _)| (mu.clone(), 1u8)).collect();
        let mut guard = self.rows.write().expect("oracle lock poisoned");
        match guard.get(lambda) {
            Some(existing) if *existing != row => Err(Error::Internal(format!(
                "oracle row for {lambda} recomputed differently"
            ))),
            Some(existing) => Ok(existing.clone()),
            None => {
                guard.insert(lambda.clone(), row.clone());
                Ok(row)
            }
        }
    }
}

impl RowProvider for DecompositionOracle {
    fn row(&self, lambda: &Partition) -> Option<DecompositionRow> {
        self.rows.read().expect("oracle lock poisoned").get(lambda).cloned()
    }
}

/// Free-function form of [`DecompositionOracle::row`].
pub fn oracle_decomposition_row(
    lambda: &Partition,
    oracle: &DecompositionOracle,
) -> Result<DecompositionRow> {
    oracle.row(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn ctx(p: u32, m: u32) -> GroupContext {
        GroupContext::new(p, m).unwrap()
    }

    fn chi(terms: &[(&str, i64)]) -> FormalCharacter<i64> {
        let mut c = FormalCharacter::zero(Basis::Chi);
        for (k, v) in terms {
            c.add_term(pt(k), *v).unwrap();
        }
        c
    }

    #[test]
    fn valuation_counts_p_powers() {
        assert_eq!(valuation(1, 3), 1);
        assert_eq!(valuation(3, 3), 2);
        assert_eq!(valuation(18, 3), 3);
    }

    #[test]
    fn full_sum_examples() {
        assert_eq!(full_jsf(&pt("4,1"), &ctx(5, 2)).unwrap(), chi(&[("1", -1), ("2,1", 1)]));
        assert_eq!(full_jsf(&pt("2,1,1"), &ctx(3, 3)).unwrap(), chi(&[("1,1", 1), ("0", -1)]));
        assert_eq!(
            full_jsf(&pt("6,4,2"), &ctx(3, 4)).unwrap(),
            chi(&[("1,1", -1), ("4,2,2", 1), ("4,4", 1), ("6,2", 2)])
        );
        assert!(full_jsf(&Partition::empty(), &ctx(7, 4)).unwrap().is_zero());
    }

    #[test]
    fn raw_terms_of_211() {
        let raw = raw_jsf(&pt("2,1,1"), &ctx(3, 3)).unwrap();
        let mut keys: Vec<(RootRef, i64, i8)> = raw.iter().map(|t| (t.root, t.l, t.sign)).collect();
        keys.sort();
        assert_eq!(
            keys,
            vec![
                (RootRef::Plus(1, 2), 2, -1),
                (RootRef::Plus(1, 3), 1, -1),
                (RootRef::Plus(1, 3), 2, 1),
                (RootRef::Double(1), 1, 1),
            ]
        );
    }

    #[test]
    fn reduced_examples() {
        let mut terms = reduced_jsf(&pt("6,4,2"), &ctx(3, 4)).unwrap();
        terms.sort_by_key(|t| (t.root, t.l));
        let got: Vec<(RootRef, i64, u32, i8, Partition)> =
            terms.into_iter().map(|t| (t.root, t.l, t.valuation, t.sign, t.target)).collect();
        assert_eq!(
            got,
            vec![
                (RootRef::Plus(1, 2), 4, 1, -1, pt("1,1")),
                (RootRef::Plus(1, 2), 5, 1, 1, pt("4,2,2")),
                (RootRef::Plus(1, 3), 4, 1, 1, pt("4,4")),
                (RootRef::Plus(2, 3), 3, 2, 1, pt("6,2")),
            ]
        );

        let mut terms = reduced_jsf(&pt("7,7,6,1"), &ctx(11, 5)).unwrap();
        terms.sort_by_key(|t| (t.root, t.l));
        let got: Vec<(RootRef, i64, Partition)> =
            terms.into_iter().map(|t| (t.root, t.l, t.target)).collect();
        assert_eq!(
            got,
            vec![(RootRef::Plus(1, 2), 2, pt("6,6,6,1")), (RootRef::Plus(3, 4), 1, pt("7,7,5"))]
        );

        assert!(reduced_jsf(&pt("1"), &ctx(5, 2)).unwrap().is_empty());
        assert!(matches!(reduced_jsf(&pt("4,1"), &ctx(5, 2)), Err(Error::Precondition(_))));
    }

    #[test]
    fn cancellation_examples() {
        let pairs = cancellation_pairs(&pt("2,1,1"), &ctx(3, 3)).unwrap();
        assert_eq!(
            pairs,
            vec![CancellationPair { plus: RootRef::Plus(1, 3), l: 1, double: RootRef::Double(1) }]
        );

        let mut got: Vec<(RootRef, i64)> = cancellation_pairs(&pt("6,4,2"), &ctx(3, 4))
            .unwrap()
            .into_iter()
            .map(|c| (c.plus, c.l))
            .collect();
        got.sort();
        assert_eq!(
            got,
            vec![
                (RootRef::Plus(1, 3), 2),
                (RootRef::Plus(1, 4), 3),
                (RootRef::Plus(2, 4), 2),
                (RootRef::Plus(3, 4), 1),
            ]
        );
        assert!(cancellation_pairs(&Partition::empty(), &ctx(5, 3)).unwrap().is_empty());
    }

    #[test]
    fn oracle_examples() {
        let oracle = DecompositionOracle::new(ctx(11, 5));
        let row = oracle.row(&pt("7,7,6,1")).unwrap();
        let expected: DecompositionRow =
            [(pt("6,6,6,1"), 1), (pt("7,7,5"), 1), (pt("6,6,5"), 1)].into_iter().collect();
        assert_eq!(row, expected);
        assert_eq!(
            oracle.row(&pt("6,6,6,1")).unwrap(),
            [(pt("6,6,5"), 1)].into_iter().collect::<DecompositionRow>()
        );
        assert!(oracle.row(&pt("6,6,5")).unwrap().is_empty());

        let l = oracle.l_expansion(&pt("7,7,6,1")).unwrap();
        let mut expected = FormalCharacter::zero(Basis::L);
        expected.add_term(pt("6,6,6,1"), 1).unwrap();
        expected.add_term(pt("7,7,5"), 1).unwrap();
        expected.add_term(pt("6,6,5"), 2).unwrap();
        assert_eq!(l, expected);

        assert!(oracle.row(&pt("10,3")).is_err());
    }

    #[test]
    fn oracle_chain_642_region() {
        // the worked chain at p = 3, m = 4 lies outside lambda_1 + l <= p except for the small weights
        let oracle = DecompositionOracle::new(ctx(3, 4));
        assert!(oracle.row(&pt("1,1")).unwrap().is_empty());
        assert!(oracle.row(&pt("6,4,2")).is_err());
    }

    #[test]
    fn linkage_bounds_hold_on_examples() {
        check_linkage_bounds(&pt("7,7,6,1"), &ctx(11, 5)).unwrap();
        check_linkage_bounds(&pt("6,6,6,3,2"), &ctx(11, 7)).unwrap();
        assert!(check_linkage_bounds(&pt("6,4,2"), &ctx(3, 4)).is_err());
    }
}
