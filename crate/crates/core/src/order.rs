//! The partial order generated by arrow-pair reversals, conjugacy under the
//! affine Weyl groups, and the matching between moves and reduced Jantzen terms.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::diagrams::{
    arrow_diagram, cap_curl, weight_of_diagram, Arrow, ArrowDiagram, DiagramContext, Mode, Side,
};
use crate::error::{precondition, Error, Result};
use crate::jantzen::{reduced_jsf, JsfTerm};
use crate::weights::{in_lambda_region, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    /// `∨∧ -> ∧∨` left of the wall.
    VeeWedgeL,
    /// `∨∧ -> ∧∨` right of the wall.
    VeeWedgeR,
    /// `∧∧ -> ∨∨` left of the wall.
    WedgeWedgeL,
    /// `∨∨ -> ∧∧` right of the wall.
    VeeVeeR,
}

impl MoveKind {
    fn classify(a: Arrow, b: Arrow, side: Side) -> Option<MoveKind> {
        use Arrow::*;
        match (a, b, side) {
            (Down, Up, Side::Left) => Some(MoveKind::VeeWedgeL),
            (Down, Up, Side::Right) => Some(MoveKind::VeeWedgeR),
            (Up, Up, Side::Left) => Some(MoveKind::WedgeWedgeL),
            (Down, Down, Side::Right) => Some(MoveKind::VeeVeeR),
            _ => None,
        }
    }
}

/// Reversal of the single arrows at nodes `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub kind: MoveKind,
    pub i: usize,
    pub j: usize,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (pair, side) = match self.kind {
            MoveKind::VeeWedgeL => ("∨∧", "L"),
            MoveKind::VeeWedgeR => ("∨∧", "R"),
            MoveKind::WedgeWedgeL => ("∧∧", "L"),
            MoveKind::VeeVeeR => ("∨∨", "R"),
        };
        write!(f, "({},{}){pair}-{side}", self.i, self.j)
    }
}

fn apply(d: &ArrowDiagram, mv: &Move) -> ArrowDiagram {
    let mut out = d.clone();
    for k in [mv.i, mv.j] {
        let a = d.node(k).single().expect("move endpoints carry single arrows");
        out.set_single(k, a.flip());
    }
    out
}

fn moves_of(d: &ArrowDiagram) -> Vec<Move> {
    let ctx = d.context();
    let singles = d.singles();
    let mut out = Vec::new();
    for (x, &(i, a)) in singles.iter().enumerate() {
        for &(j, b) in &singles[x + 1..] {
            let side = ctx.side_of(i);
            if side != ctx.side_of(j) {
                continue;
            }
            if let Some(kind) = MoveKind::classify(a, b, side) {
                out.push(Move { kind, i, j });
            }
        }
    }
    out
}

/// Every diagram one legal move away, over both node-1 choices, one entry per
/// resulting weight.
pub fn successors(d: &ArrowDiagram) -> Result<Vec<(Move, ArrowDiagram)>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for v in d.zero_variants() {
        for mv in moves_of(&v) {
            let next = apply(&v, &mv);
            if seen.insert(weight_of_diagram(&next)?) {
                out.push((mv, next));
            }
        }
    }
    Ok(out)
}

fn require_region(lambda: &Partition, ctx: &DiagramContext) -> Result<()> {
    if in_lambda_region(lambda, ctx.s(), ctx.group())? {
        Ok(())
    } else {
        Err(precondition(format!("{lambda} is not in the region for s = {}", ctx.s())))
    }
}

fn closure(
    lambda: &Partition,
    ctx: &DiagramContext,
    keep: impl Fn(&Partition) -> bool,
) -> Result<BTreeSet<Partition>> {
    let start = arrow_diagram(lambda, ctx, Arrow::Down)?;
    let mut seen = BTreeSet::from([lambda.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(d) = queue.pop_front() {
        for (_, next) in successors(&d)? {
            let w = weight_of_diagram(&next)?;
            if keep(&w) && seen.insert(w) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// `mu ⪯ lambda`.
pub fn preceq(mu: &Partition, lambda: &Partition, ctx: &DiagramContext) -> Result<bool> {
    require_region(lambda, ctx)?;
    if mu == lambda {
        return Ok(true);
    }
    if !mu.is_contained_in(lambda)
        || (lambda.size() - mu.size()) % 2 == 1
        || !in_lambda_region(mu, ctx.s(), ctx.group())?
    {
        return Ok(false);
    }
    Ok(closure(lambda, ctx, |w| mu.is_contained_in(w))?.contains(mu))
}

/// All `mu ⪯ lambda`, larger weights first (so `lambda` leads).
pub fn lower_set(lambda: &Partition, ctx: &DiagramContext) -> Result<Vec<Partition>> {
    require_region(lambda, ctx)?;
    let mut out: Vec<Partition> = closure(lambda, ctx, |_| true)?.into_iter().collect();
    out.sort_by(|a, b| b.size().cmp(&a.size()).then_with(|| b.cmp(a)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeylGroup {
    /// The affine Weyl group of `Sp_2m`.
    Wp,
    /// `W_p(C_s)`.
    WpC,
    /// `W_p(D_s)`.
    WpD,
}

/// Arrow counts per node when the first `s` entries of `lambda + rho` are
/// placed, repeats allowed: `(ups, downs)`, with node 1 counted in `ups`.
fn multiset_placement(lambda: &Partition, ctx: &DiagramContext) -> Result<Vec<(u32, u32)>> {
    if lambda.len() > ctx.s() as usize {
        return Err(precondition(format!("l({lambda}) exceeds s = {}", ctx.s())));
    }
    let x = ctx.group().shifted(lambda)?;
    let mut counts = vec![(0u32, 0u32); ctx.node_count()];
    for &v in &x.entries()[..ctx.s() as usize] {
        match ctx.locate(v) {
            (k, Some(Arrow::Down)) => counts[k - 1].1 += 1,
            (k, _) => counts[k - 1].0 += 1,
        }
    }
    Ok(counts)
}

/// Conjugacy of `lambda` and `mu` under the dot action of `group`.
pub fn conjugate(
    lambda: &Partition,
    mu: &Partition,
    ctx: &DiagramContext,
    group: WeylGroup,
) -> Result<bool> {
    let a = multiset_placement(lambda, ctx)?;
    let b = multiset_placement(mu, ctx)?;
    let same_nodes = a.iter().zip(&b).all(|(x, y)| x.0 + x.1 == y.0 + y.1);
    let even = lambda.size() % 2 == mu.size() % 2;
    if !(same_nodes && even) {
        return Ok(false);
    }
    Ok(match group {
        WeylGroup::Wp | WeylGroup::WpC => true,
        WeylGroup::WpD => {
            let flips: u32 = a.iter().zip(&b).skip(1).map(|(x, y)| x.0.abs_diff(y.0)).sum();
            a[0].0 > 0 || flips.is_multiple_of(2)
        }
    })
}

/// Pairs each legal move on the diagram of `lambda` with the reduced Jantzen
/// term of the same target.
pub fn jsf_arrow_pairs(lambda: &Partition, ctx: &DiagramContext) -> Result<Vec<(Move, JsfTerm)>> {
    let d = arrow_diagram(lambda, ctx, Arrow::Down)?;
    let moves = successors(&d)?;
    let mut terms = reduced_jsf(lambda, ctx.group())?;
    if moves.len() != terms.len() {
        return Err(Error::Internal(format!(
            "{lambda}: {} moves but {} reduced terms",
            moves.len(),
            terms.len()
        )));
    }
    let mut out = Vec::with_capacity(moves.len());
    for (mv, next) in moves {
        let w = weight_of_diagram(&next)?;
        let pos = terms.iter().position(|t| t.target == w).ok_or_else(|| {
            Error::Internal(format!("{lambda}: move {mv} reaches {w} with no reduced term"))
        })?;
        out.push((mv, terms.swap_remove(pos)));
    }
    Ok(out)
}

/// True when `c_lambda` has no caps and no curls.
pub fn is_weyl_irreducible(lambda: &Partition, ctx: &DiagramContext) -> Result<bool> {
    Ok(!cap_curl(&arrow_diagram(lambda, ctx, Arrow::Down)?, Mode::C).has_links())
}

/// Weights reached by reversing a pair of consecutive single arrows, where an
/// `∧∧` pair may have no single arrow to its left and a `∨∨` pair none to its right.
pub fn maximal_targets(lambda: &Partition, ctx: &DiagramContext) -> Result<Vec<Partition>> {
    let d = arrow_diagram(lambda, ctx, Arrow::Down)?;
    let mut out = BTreeSet::new();
    for v in d.zero_variants() {
        for side in [Side::Left, Side::Right] {
            let arrows: Vec<(usize, Arrow)> =
                v.singles().into_iter().filter(|&(k, _)| ctx.side_of(k) == side).collect();
            for (t, w) in arrows.windows(2).enumerate() {
                let (i, a) = w[0];
                let (j, b) = w[1];
                let allowed = match MoveKind::classify(a, b, side) {
                    Some(MoveKind::VeeWedgeL | MoveKind::VeeWedgeR) => true,
                    Some(MoveKind::WedgeWedgeL) => t == 0,
                    Some(MoveKind::VeeVeeR) => t + 2 == arrows.len(),
                    None => false,
                };
                if allowed {
                    let kind = MoveKind::classify(a, b, side).expect("checked above");
                    out.insert(weight_of_diagram(&apply(&v, &Move { kind, i, j }))?);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::GroupContext;

    fn pt(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn dctx(p: u32, m: u32, s: u32) -> DiagramContext {
        DiagramContext::new(GroupContext::new(p, m).unwrap(), s).unwrap()
    }

    #[test]
    fn successor_examples() {
        let c = dctx(11, 7, 5);
        let l = pt("6,6,6,3,2");
        let d = arrow_diagram(&l, &c, Arrow::Down).unwrap();
        let succ = successors(&d).unwrap();
        let moves: Vec<String> = succ.iter().map(|(m, _)| m.to_string()).collect();
        assert_eq!(moves, ["(1,2)∨∧-L", "(1,3)∨∧-L", "(2,3)∧∧-L", "(5,6)∨∧-R"]);
        for (_, n) in &succ {
            let w = weight_of_diagram(n).unwrap();
            assert!(w.size() < l.size());
            assert!(in_lambda_region(&w, 5, c.group()).unwrap());
        }

        let c = dctx(11, 5, 4);
        let d = arrow_diagram(&pt("7,7,6,1"), &c, Arrow::Down).unwrap();
        assert_eq!(successors(&d).unwrap().len(), 2);

        let d = arrow_diagram(&pt("1,1"), &dctx(5, 7, 2), Arrow::Down).unwrap();
        assert!(successors(&d).unwrap().is_empty());
    }

    #[test]
    fn preceq_examples() {
        let c = dctx(11, 7, 5);
        let l = pt("6,6,6,3,2");
        let mu = pt("4,4,4,2,1");
        assert!(preceq(&mu, &l, &c).unwrap());
        assert!(preceq(&l, &l, &c).unwrap());
        assert!(!preceq(&l, &mu, &c).unwrap());
        assert!(!preceq(&pt("6,6,6,2,2"), &l, &c).unwrap());
    }

    #[test]
    fn lower_set_examples() {
        let c = dctx(11, 7, 5);
        let got = lower_set(&pt("6,6,6,3,2"), &c).unwrap();
        let expected: Vec<Partition> = [
            "6,6,6,3,2", "6,6,6,2,1", "6,5,5,3,2", "6,5,5,2,1", "5,5,4,3,2", "5,5,4,2,1",
            "4,4,4,3,2", "4,4,4,2,1",
        ]
        .iter()
        .map(|s| pt(s))
        .collect();
        assert_eq!(got, expected);

        let got = lower_set(&pt("7,7,6,1"), &dctx(11, 5, 4)).unwrap();
        assert!(got.contains(&pt("6,6,6,1")) && got.contains(&pt("7,7,5")));
        assert_eq!(got[0], pt("7,7,6,1"));

        assert_eq!(lower_set(&pt("1,1"), &dctx(5, 7, 2)).unwrap(), vec![pt("1,1")]);
    }

    #[test]
    fn conjugacy_examples() {
        let c = dctx(11, 7, 5);
        let l = pt("6,6,6,3,2");
        assert!(conjugate(&l, &pt("6,5,5,3,2"), &c, WeylGroup::WpD).unwrap());
        for g in [WeylGroup::Wp, WeylGroup::WpC, WeylGroup::WpD] {
            assert!(conjugate(&l, &l, &c, g).unwrap());
        }
        assert!(!conjugate(&l, &pt("6,6,6,2,2"), &c, WeylGroup::WpC).unwrap());
    }

    #[test]
    fn d_conjugacy_needs_even_flips_without_node_one() {
        let c = dctx(7, 3, 2);
        // rho_s = 2: wall after node 2; values 2..8
        let l = pt("0");
        let d = arrow_diagram(&l, &c, Arrow::Down).unwrap();
        assert_eq!(d.node(1).single(), None);
        for mu in Partition::enumerate(2, 6) {
            if !in_lambda_region(&mu, 2, c.group()).unwrap() {
                continue;
            }
            let e = arrow_diagram(&mu, &c, Arrow::Down).unwrap();
            if e.node(1).single().is_some() || !d.same_support(&e) {
                continue;
            }
            let flips = d.nodes().iter().zip(e.nodes()).filter(|(x, y)| x != y).count();
            assert_eq!(conjugate(&l, &mu, &c, WeylGroup::WpD).unwrap(), flips % 2 == 0, "{mu}");
        }
    }

    #[test]
    fn jsf_pairs_examples() {
        let pairs = jsf_arrow_pairs(&pt("6,6,6,3,2"), &dctx(11, 7, 5)).unwrap();
        assert_eq!(pairs.len(), 4);
        let pairs = jsf_arrow_pairs(&pt("7,7,6,1"), &dctx(11, 5, 4)).unwrap();
        let mut targets: Vec<Partition> = pairs.into_iter().map(|(_, t)| t.target).collect();
        targets.sort();
        assert_eq!(targets, vec![pt("6,6,6,1"), pt("7,7,5")]);
        assert!(jsf_arrow_pairs(&pt("1,1"), &dctx(5, 7, 2)).unwrap().is_empty());
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_weyl_irreducible(&Partition::empty(), &dctx(11, 5, 1)).unwrap());
        assert!(!is_weyl_irreducible(&pt("6,6,6,3,2"), &dctx(11, 7, 5)).unwrap());
        assert!(is_weyl_irreducible(&pt("6,6,5"), &dctx(11, 5, 3)).unwrap());
    }

    #[test]
    fn maximal_target_examples() {
        assert_eq!(
            maximal_targets(&pt("6,6,6,3,2"), &dctx(11, 7, 5)).unwrap(),
            vec![pt("6,5,5,3,2"), pt("6,6,6,2,1")]
        );
        let t = maximal_targets(&pt("11,11,11,11,11,11,10,6,4,4,1"), &dctx(23, 17, 12)).unwrap();
        assert_eq!(t.len(), 3);
        assert!(maximal_targets(&pt("1,1"), &dctx(5, 7, 2)).unwrap().is_empty());
    }
}
