//! Arrow diagrams on `(p+1)/2` nodes with a wall, cap-curl diagrams `c_lambda`
//! (mode [`Mode::C`]) and codiagrams `co_mu` (mode [`Mode::Co`]), overlays and
//! the dagger involution.
//!
//! Node 1 carries the single value `0 mod p`; node `k >= 2` has a bottom slot
//! `k-1 mod p` (arrow `∧`) and a top slot `-(k-1) mod p` (arrow `∨`). Values
//! run through `rho_s, ..., rho_s + p - 1` starting just after the wall.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{precondition, Error, Result};
use crate::weights::{in_lambda_region, GroupContext, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    Up,
    Down,
}

impl Arrow {
    pub fn flip(self) -> Arrow {
        match self {
            Arrow::Up => Arrow::Down,
            Arrow::Down => Arrow::Up,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeState {
    Empty,
    Up,
    Down,
    Cross,
}

impl NodeState {
    pub fn single(self) -> Option<Arrow> {
        match self {
            NodeState::Up => Some(Arrow::Up),
            NodeState::Down => Some(Arrow::Down),
            _ => None,
        }
    }

    pub fn arrows(self) -> usize {
        match self {
            NodeState::Empty => 0,
            NodeState::Up | NodeState::Down => 1,
            NodeState::Cross => 2,
        }
    }

    fn from_arrow(a: Arrow) -> NodeState {
        match a {
            Arrow::Up => NodeState::Up,
            Arrow::Down => NodeState::Down,
        }
    }

    fn name(self) -> &'static str {
        match self {
            NodeState::Empty => "empty",
            NodeState::Up => "up",
            NodeState::Down => "down",
            NodeState::Cross => "cross",
        }
    }

    fn from_name(s: &str) -> Option<NodeState> {
        Some(match s {
            "empty" => NodeState::Empty,
            "up" => NodeState::Up,
            "down" => NodeState::Down,
            "cross" => NodeState::Cross,
            _ => return None,
        })
    }

    fn symbol(self, ascii: bool) -> char {
        match (self, ascii) {
            (NodeState::Empty, _) => 'o',
            (NodeState::Up, false) => '∧',
            (NodeState::Down, false) => '∨',
            (NodeState::Cross, false) => '×',
            (NodeState::Up, true) => '^',
            (NodeState::Down, true) => 'v',
            (NodeState::Cross, true) => 'x',
        }
    }

    fn from_symbol(c: char) -> Option<NodeState> {
        Some(match c {
            'o' => NodeState::Empty,
            '∧' | '^' => NodeState::Up,
            '∨' | 'v' => NodeState::Down,
            '×' | 'x' => NodeState::Cross,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn tag(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

/// Where the wall crosses the line of nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallSide {
    Below,
    Above,
    /// Every node lies left of the wall.
    RightEnd,
}

/// The drawing choice available when `rho_s = (p+1)/2 mod p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WallDrawing {
    Above,
    Below,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiagramContext {
    group: GroupContext,
    s: u32,
    rho_s: i64,
    residue: i64,
    wall_cut: usize,
    wall_side: WallSide,
}

impl DiagramContext {
    pub fn new(group: GroupContext, s: u32) -> Result<Self> {
        Self::with_drawing(group, s, None)
    }

    /// Builds the context; a drawing choice is only accepted where it is free
    /// or agrees with the forced side.
    pub fn with_drawing(group: GroupContext, s: u32, drawing: Option<WallDrawing>) -> Result<Self> {
        if s == 0 || s > group.m().min(group.p()) {
            return Err(precondition(format!(
                "s = {s} must lie in 1..={}",
                group.m().min(group.p())
            )));
        }
        let p = group.p() as i64;
        let half = (p - 1) / 2;
        let rho_s = group.m() as i64 - s as i64 + 1;
        let mut residue = rho_s.rem_euclid(p);
        if residue > half {
            residue -= p;
        }
        let (wall_cut, wall_side) = if residue >= 1 {
            (residue as usize, WallSide::Below)
        } else if residue > -half {
            ((1 - residue) as usize, WallSide::Above)
        } else {
            ((half + 1) as usize, WallSide::RightEnd)
        };
        match (wall_side, drawing) {
            (WallSide::Below, Some(WallDrawing::Above)) | (WallSide::Above, Some(WallDrawing::Below)) => {
                return Err(precondition(format!(
                    "the wall for rho_s = {rho_s} cannot be drawn on the other side"
                )));
            }
            _ => {}
        }
        Ok(DiagramContext { group, s, rho_s, residue, wall_cut, wall_side })
    }

    pub fn group(&self) -> &GroupContext {
        &self.group
    }

    pub fn p(&self) -> u32 {
        self.group.p()
    }

    pub fn m(&self) -> u32 {
        self.group.m()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn node_count(&self) -> usize {
        (self.group.p() as usize).div_ceil(2)
    }

    pub fn rho_s(&self) -> i64 {
        self.rho_s
    }

    /// Residue of `rho_s` in `(-p/2, p/2)`.
    pub fn signed_residue(&self) -> i64 {
        self.residue
    }

    /// Nodes `1..=wall_cut` lie left of the wall.
    pub fn wall_cut(&self) -> usize {
        self.wall_cut
    }

    pub fn wall_side(&self) -> WallSide {
        self.wall_side
    }

    /// True when the wall may be drawn above or below the line.
    pub fn drawing_is_free(&self) -> bool {
        self.wall_side == WallSide::RightEnd
    }

    pub fn side_of(&self, node: usize) -> Side {
        if node <= self.wall_cut {
            Side::Left
        } else {
            Side::Right
        }
    }

    fn window(&self, residue: i64) -> i64 {
        let p = self.group.p() as i64;
        self.rho_s + (residue - self.rho_s).rem_euclid(p)
    }

    /// The value sitting at `node` under `arrow` (ignored at node 1).
    pub fn value_at(&self, node: usize, arrow: Arrow) -> i64 {
        let k = node as i64 - 1;
        let residue = match (node, arrow) {
            (1, _) => 0,
            (_, Arrow::Up) => k,
            (_, Arrow::Down) => -k,
        };
        self.window(residue)
    }

    /// Node and arrow of an integer value; the arrow at node 1 is `None`.
    pub fn locate(&self, value: i64) -> (usize, Option<Arrow>) {
        let p = self.group.p() as i64;
        let q = value.rem_euclid(p);
        if q == 0 {
            (1, None)
        } else if q <= (p - 1) / 2 {
            (q as usize + 1, Some(Arrow::Up))
        } else {
            ((p - q) as usize + 1, Some(Arrow::Down))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowDiagram {
    ctx: DiagramContext,
    nodes: Vec<NodeState>,
}

impl ArrowDiagram {
    pub fn new(ctx: DiagramContext, nodes: Vec<NodeState>) -> Result<Self> {
        if nodes.len() != ctx.node_count() {
            return Err(precondition(format!(
                "expected {} nodes, got {}",
                ctx.node_count(),
                nodes.len()
            )));
        }
        if nodes[0] == NodeState::Cross {
            return Err(precondition("node 1 cannot carry two arrows"));
        }
        let count: usize = nodes.iter().map(|n| n.arrows()).sum();
        if count != ctx.s() as usize {
            return Err(precondition(format!("diagram has {count} arrows, s = {}", ctx.s())));
        }
        Ok(ArrowDiagram { ctx, nodes })
    }

    pub fn context(&self) -> &DiagramContext {
        &self.ctx
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    /// State of node `k` (1-based).
    pub fn node(&self, k: usize) -> NodeState {
        self.nodes[k - 1]
    }

    /// Single arrows as `(node, arrow)` in node order.
    pub fn singles(&self) -> Vec<(usize, Arrow)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(i, n)| n.single().map(|a| (i + 1, a)))
            .collect()
    }

    pub fn up_count(&self) -> usize {
        self.nodes.iter().filter(|&&n| n == NodeState::Up).count()
    }

    /// Same node support (empty / single / cross at each node).
    pub fn same_support(&self, other: &ArrowDiagram) -> bool {
        self.nodes.len() == other.nodes.len()
            && self.nodes.iter().zip(&other.nodes).all(|(a, b)| a.arrows() == b.arrows())
    }

    /// The diagram with the node-1 arrow (if any) set to `a`.
    pub fn with_zero_arrow(&self, a: Arrow) -> ArrowDiagram {
        let mut d = self.clone();
        if d.nodes[0].single().is_some() {
            d.nodes[0] = NodeState::from_arrow(a);
        }
        d
    }

    /// Both node-1 variants, or just `self` when node 1 is empty.
    pub fn zero_variants(&self) -> Vec<ArrowDiagram> {
        match self.nodes[0].single() {
            Some(a) => vec![self.clone(), self.with_zero_arrow(a.flip())],
            None => vec![self.clone()],
        }
    }

    /// Replaces every single arrow by its opposite.
    pub fn flipped(&self) -> ArrowDiagram {
        let mut d = self.clone();
        for n in d.nodes.iter_mut() {
            if let Some(a) = n.single() {
                *n = NodeState::from_arrow(a.flip());
            }
        }
        d
    }

    /// Sets node `k` to the single arrow `a`; `k` must carry a single arrow.
    pub(crate) fn set_single(&mut self, k: usize, a: Arrow) {
        debug_assert!(self.nodes[k - 1].single().is_some());
        self.nodes[k - 1] = NodeState::from_arrow(a);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Unicode => self.line(false),
            Format::Ascii => self.line(true),
            Format::Json => json_string(&self.json_value(None)),
        }
    }

    fn line(&self, ascii: bool) -> String {
        let mut out = String::new();
        for (i, n) in self.nodes.iter().enumerate() {
            out.push(n.symbol(ascii));
            if i + 1 == self.ctx.wall_cut {
                out.push('|');
            }
        }
        out
    }

    fn json_value(&self, links: Option<(&CapCurlDiagram, Mode)>) -> Value {
        let nodes: Vec<&str> = self.nodes.iter().map(|n| n.name()).collect();
        let links_json = |ls: &[Link]| -> Vec<Value> {
            ls.iter().map(|l| json!([l.i, l.j, l.side.tag()])).collect()
        };
        let (caps, curls) = match links {
            Some((c, _)) => (links_json(&c.caps), links_json(&c.curls)),
            None => (vec![], vec![]),
        };
        let mut v = json!({
            "p": self.ctx.p(),
            "m": self.ctx.m(),
            "s": self.ctx.s(),
            "wall_after_node": self.ctx.wall_cut,
            "nodes": nodes,
            "caps": caps,
            "curls": curls,
        });
        if let Some((_, mode)) = links {
            v["mode"] = json!(mode.tag());
        }
        v
    }
}

impl fmt::Display for ArrowDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line(false))
    }
}

fn json_string(v: &Value) -> String {
    serde_json::to_string(v).expect("json values always serialize")
}

/// The arrow diagram of `lambda`, node 1 (if occupied) pointing `zero_arrow`.
pub fn arrow_diagram(
    lambda: &Partition,
    ctx: &DiagramContext,
    zero_arrow: Arrow,
) -> Result<ArrowDiagram> {
    if !in_lambda_region(lambda, ctx.s(), ctx.group())? {
        return Err(precondition(format!(
            "{lambda} is not in the region l <= s <= p - lambda_1 for s = {}",
            ctx.s()
        )));
    }
    let x = ctx.group().shifted(lambda)?;
    let lo = ctx.rho_s();
    let hi = lo + ctx.p() as i64 - 1;
    let mut nodes = vec![NodeState::Empty; ctx.node_count()];
    for &v in &x.entries()[..ctx.s() as usize] {
        if v < lo || v > hi {
            return Err(Error::Internal(format!("value {v} of {lambda} outside [{lo}, {hi}]")));
        }
        let (k, arrow) = ctx.locate(v);
        let arrow = arrow.unwrap_or(zero_arrow);
        let slot = &mut nodes[k - 1];
        *slot = match (*slot, arrow) {
            (NodeState::Empty, a) => NodeState::from_arrow(a),
            (NodeState::Up, Arrow::Down) | (NodeState::Down, Arrow::Up) if k > 1 => NodeState::Cross,
            _ => return Err(Error::Internal(format!("value {v} of {lambda} collides at node {k}"))),
        };
    }
    ArrowDiagram::new(*ctx, nodes)
}

/// Reads the weight back off a diagram; inverse of [`arrow_diagram`].
pub fn weight_of_diagram(d: &ArrowDiagram) -> Result<Partition> {
    let ctx = d.context();
    let mut values = Vec::with_capacity(ctx.s() as usize);
    for (i, n) in d.nodes().iter().enumerate() {
        let k = i + 1;
        match n {
            NodeState::Empty => {}
            NodeState::Up => values.push(ctx.value_at(k, Arrow::Up)),
            NodeState::Down => values.push(ctx.value_at(k, Arrow::Down)),
            NodeState::Cross => {
                values.push(ctx.value_at(k, Arrow::Up));
                values.push(ctx.value_at(k, Arrow::Down));
            }
        }
    }
    values.sort_unstable_by(|a, b| b.cmp(a));
    let parts = values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            u32::try_from(v - ctx.group().rho_at(i + 1))
                .map_err(|_| precondition(format!("diagram {d} does not encode a partition")))
        })
        .collect::<Result<Vec<u32>>>()?;
    Partition::new(parts)
}

/// The weight whose diagram has every single arrow reversed.
pub fn dagger(lambda: &Partition, ctx: &DiagramContext) -> Result<Partition> {
    weight_of_diagram(&arrow_diagram(lambda, ctx, Arrow::Down)?.flipped())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `c_lambda`: caps on `∨∧`.
    C,
    /// `co_mu`: caps on `∧∨`.
    Co,
}

impl Mode {
    fn tag(self) -> &'static str {
        match self {
            Mode::C => "c",
            Mode::Co => "co",
        }
    }

    fn opener(self) -> Arrow {
        match self {
            Mode::C => Arrow::Down,
            Mode::Co => Arrow::Up,
        }
    }
}

/// A cap or curl joining nodes `i < j` on one side of the wall.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Link {
    pub i: usize,
    pub j: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapCurlDiagram {
    pub base: ArrowDiagram,
    pub caps: Vec<Link>,
    pub curls: Vec<Link>,
    pub unmatched: Vec<usize>,
    pub mode: Mode,
}

impl CapCurlDiagram {
    pub fn has_links(&self) -> bool {
        !self.caps.is_empty() || !self.curls.is_empty()
    }

    fn endpoints(&self) -> impl Iterator<Item = usize> + '_ {
        self.caps.iter().chain(&self.curls).flat_map(|l| [l.i, l.j])
    }

    pub fn render(&self, format: Format) -> String {
        let ascii = match format {
            Format::Json => return json_string(&self.base.json_value(Some((self, self.mode)))),
            Format::Ascii => true,
            Format::Unicode => false,
        };
        let arrows = self.base.line(ascii);
        let brackets = self.bracket_line();
        match self.mode {
            Mode::C => format!("{brackets}\n{arrows}"),
            Mode::Co => format!("{arrows}\n{brackets}"),
        }
    }

    fn bracket_line(&self) -> String {
        let n = self.base.nodes.len();
        let mut marks = vec![' '; n];
        for l in &self.caps {
            marks[l.i - 1] = '(';
            marks[l.j - 1] = ')';
        }
        for l in &self.curls {
            marks[l.i - 1] = '[';
            marks[l.j - 1] = ']';
        }
        let mut out = String::new();
        for (i, c) in marks.into_iter().enumerate() {
            out.push(c);
            if i + 1 == self.base.ctx.wall_cut {
                out.push('|');
            }
        }
        out.trim_end().to_string()
    }
}

fn scan_side(
    arrows: &[(usize, Arrow)],
    side: Side,
    mode: Mode,
    out: &mut CapCurlDiagram,
) {
    let mut openers: Vec<usize> = Vec::new();
    let mut closers: Vec<usize> = Vec::new();
    for &(k, a) in arrows {
        if a == mode.opener() {
            openers.push(k);
        } else if let Some(i) = openers.pop() {
            out.caps.push(Link { i, j: k, side });
        } else {
            closers.push(k);
        }
    }
    match side {
        Side::Left => {
            for pair in closers.chunks(2) {
                match pair {
                    [i, j] => out.curls.push(Link { i: *i, j: *j, side }),
                    _ => out.unmatched.extend_from_slice(pair),
                }
            }
            out.unmatched.extend(openers);
        }
        Side::Right => {
            for pair in openers.rchunks(2) {
                match pair {
                    [i, j] => out.curls.push(Link { i: *i, j: *j, side }),
                    _ => out.unmatched.extend_from_slice(pair),
                }
            }
            out.unmatched.extend(closers);
        }
    }
}

/// Builds `c_lambda` ([`Mode::C`]) or `co_mu` ([`Mode::Co`]) over a diagram.
pub fn cap_curl(d: &ArrowDiagram, mode: Mode) -> CapCurlDiagram {
    let mut out = CapCurlDiagram {
        base: d.clone(),
        caps: Vec::new(),
        curls: Vec::new(),
        unmatched: Vec::new(),
        mode,
    };
    let (left, right): (Vec<_>, Vec<_>) =
        d.singles().into_iter().partition(|&(k, _)| d.ctx.side_of(k) == Side::Left);
    scan_side(&left, Side::Left, mode, &mut out);
    scan_side(&right, Side::Right, mode, &mut out);
    out.caps.sort();
    out.curls.sort();
    out.unmatched.sort();
    out
}

/// The links of a cap-curl diagram laid over another weight's arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlay {
    /// The base links over the other diagram, node 1 parity-normalized.
    pub diagram: CapCurlDiagram,
    /// Caps have opposite endpoint arrows and curls equal ones.
    pub oriented: bool,
    /// Single arrows off the link endpoints agree with the base diagram.
    pub agrees_off_links: bool,
}

/// Overlays `base` on the diagram of `other`.
pub fn overlay(base: &CapCurlDiagram, other: &Partition) -> Result<Overlay> {
    let d = arrow_diagram(other, base.base.context(), Arrow::Down).map_err(|e| match e {
        Error::Precondition(msg) => Error::NotComparable(msg),
        e => e,
    })?;
    overlay_diagram(base, &d)
}

/// [`overlay`] on an already-built diagram.
pub fn overlay_diagram(base: &CapCurlDiagram, other: &ArrowDiagram) -> Result<Overlay> {
    if base.base.context() != other.context() || !base.base.same_support(other) {
        return Err(Error::NotComparable(format!(
            "{} and {} differ in node support",
            base.base, other
        )));
    }
    let mut d = other.clone();
    if let Some(a) = d.nodes[0].single() {
        if d.up_count() % 2 != base.base.up_count() % 2 {
            d.set_single(1, a.flip());
        }
    }
    let arrow = |k: usize| d.node(k).single().expect("link endpoints carry single arrows");
    let oriented = base.caps.iter().all(|l| arrow(l.i) != arrow(l.j))
        && base.curls.iter().all(|l| arrow(l.i) == arrow(l.j));
    let ends: Vec<usize> = base.endpoints().collect();
    let agrees_off_links = (1..=d.nodes.len())
        .filter(|k| !ends.contains(k))
        .all(|k| d.node(k) == base.base.node(k));
    let diagram = CapCurlDiagram {
        base: d,
        caps: base.caps.clone(),
        curls: base.curls.clone(),
        unmatched: base.unmatched.clone(),
        mode: base.mode,
    };
    Ok(Overlay { diagram, oriented, agrees_off_links })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Format {
    Unicode,
    Ascii,
    Json,
}

fn parse_line(text: &str, ctx: &DiagramContext) -> Result<ArrowDiagram> {
    let mut nodes = Vec::new();
    let mut wall = None;
    for c in text.chars().filter(|c| !c.is_whitespace()) {
        if c == '|' {
            if wall.replace(nodes.len()).is_some() {
                return Err(Error::Parse(text.to_string()));
            }
        } else {
            nodes.push(NodeState::from_symbol(c).ok_or_else(|| Error::Parse(text.to_string()))?);
        }
    }
    if wall != Some(ctx.wall_cut()) {
        return Err(precondition(format!(
            "wall of `{text}` does not sit after node {}",
            ctx.wall_cut()
        )));
    }
    ArrowDiagram::new(*ctx, nodes)
}

/// Parses the one-line Unicode or ASCII form.
pub fn parse_diagram(text: &str, ctx: &DiagramContext) -> Result<ArrowDiagram> {
    parse_line(text.trim(), ctx)
}

fn is_arrow_line(line: &str) -> bool {
    line.chars().any(|c| NodeState::from_symbol(c).is_some())
}

/// Parses the two-line text form of a cap-curl diagram.
pub fn parse_cap_curl(text: &str, ctx: &DiagramContext) -> Result<CapCurlDiagram> {
    let lines: Vec<&str> = text.lines().collect();
    let (arrows, brackets, mode) = match lines.as_slice() {
        [a, b] if is_arrow_line(b) && !is_arrow_line(a) => (*b, *a, Mode::C),
        [a, b] if is_arrow_line(a) && !is_arrow_line(b) => (*a, *b, Mode::Co),
        [a] if is_arrow_line(a) => (*a, "", Mode::C),
        _ => return Err(Error::Parse(text.to_string())),
    };
    let base = parse_line(arrows, ctx)?;
    let mut stack: Vec<(usize, char)> = Vec::new();
    let mut caps = Vec::new();
    let mut curls = Vec::new();
    let mut node = 0;
    for c in brackets.chars() {
        if c == '|' {
            continue;
        }
        node += 1;
        match c {
            ' ' => {}
            '(' | '[' => stack.push((node, c)),
            ')' | ']' => {
                let open = if c == ')' { '(' } else { '[' };
                match stack.pop() {
                    Some((i, o)) if o == open => {
                        let side = ctx.side_of(i);
                        if side != ctx.side_of(node) {
                            return Err(Error::Parse(text.to_string()));
                        }
                        let link = Link { i, j: node, side };
                        if c == ')' {
                            caps.push(link)
                        } else {
                            curls.push(link)
                        }
                    }
                    _ => return Err(Error::Parse(text.to_string())),
                }
            }
            _ => return Err(Error::Parse(text.to_string())),
        }
    }
    if !stack.is_empty() || node > ctx.node_count() {
        return Err(Error::Parse(text.to_string()));
    }
    from_links(base, caps, curls, mode)
}

fn from_links(
    base: ArrowDiagram,
    mut caps: Vec<Link>,
    mut curls: Vec<Link>,
    mode: Mode,
) -> Result<CapCurlDiagram> {
    caps.sort();
    curls.sort();
    let ends: Vec<usize> = caps.iter().chain(&curls).flat_map(|l| [l.i, l.j]).collect();
    for &k in &ends {
        if k == 0 || k > base.nodes.len() || base.node(k).single().is_none() {
            return Err(precondition(format!("link endpoint {k} is not a single arrow")));
        }
    }
    let mut sorted = ends.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ends.len() {
        return Err(precondition("links share an endpoint"));
    }
    let unmatched = base
        .singles()
        .into_iter()
        .map(|(k, _)| k)
        .filter(|k| !ends.contains(k))
        .collect();
    Ok(CapCurlDiagram { base, caps, curls, unmatched, mode })
}

fn json_usize(v: &Value, key: &str) -> Result<usize> {
    v.get(key)
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| Error::Parse(format!("missing `{key}`")))
}

/// Parses the JSON form of either an arrow diagram or a cap-curl diagram
/// (the latter carries a `mode` field).
pub fn parse_json(text: &str) -> Result<(ArrowDiagram, Option<CapCurlDiagram>)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let group = GroupContext::new(json_usize(&v, "p")? as u32, json_usize(&v, "m")? as u32)?;
    let ctx = DiagramContext::new(group, json_usize(&v, "s")? as u32)?;
    if json_usize(&v, "wall_after_node")? != ctx.wall_cut() {
        return Err(precondition("wall_after_node disagrees with (p, m, s)"));
    }
    let nodes = v
        .get("nodes")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("missing `nodes`".into()))?
        .iter()
        .map(|n| n.as_str().and_then(NodeState::from_name).ok_or_else(|| Error::Parse(n.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let base = ArrowDiagram::new(ctx, nodes)?;
    let links = |key: &str| -> Result<Vec<Link>> {
        let arr = v.get(key).and_then(Value::as_array).cloned().unwrap_or_default();
        arr.iter()
            .map(|l| {
                let i = l.get(0).and_then(Value::as_u64);
                let j = l.get(1).and_then(Value::as_u64);
                let side = match l.get(2).and_then(Value::as_str) {
                    Some("L") => Some(Side::Left),
                    Some("R") => Some(Side::Right),
                    _ => None,
                };
                match (i, j, side) {
                    (Some(i), Some(j), Some(side))
                        if i < j
                            && ctx.side_of(i as usize) == side
                            && ctx.side_of(j as usize) == side =>
                    {
                        Ok(Link { i: i as usize, j: j as usize, side })
                    }
                    _ => Err(Error::Parse(l.to_string())),
                }
            })
            .collect()
    };
    let mode = match v.get("mode").and_then(Value::as_str) {
        None => return Ok((base, None)),
        Some("c") => Mode::C,
        Some("co") => Mode::Co,
        Some(other) => return Err(Error::Parse(other.to_string())),
    };
    let ccd = from_links(base.clone(), links("caps")?, links("curls")?, mode)?;
    Ok((base, Some(ccd)))
}
