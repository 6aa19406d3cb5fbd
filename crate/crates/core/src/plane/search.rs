//! Guided search for the regular curves through a configuration.
//!
//! In a regular curve every component of the complement of the points is a
//! tree flowing from the points towards exactly one end. Cutting the curve at
//! an edge therefore leaves two kinds of pieces:
//!
//! * an *emitting* piece, whose flow leaves through the cut edge: it is a ray
//!   starting either at one of its points or at a vertex where two emitting
//!   rays meet;
//! * an *absorbing* piece, whose flow enters through the cut edge: the
//!   incoming ray either is an end, or meets an emitting ray at a vertex from
//!   which absorbing pieces continue.
//!
//! A piece is described by its leaves `L`, its points `S` and whether it
//! contains the non-trivalent unmarked vertex. Point counts are forced by
//! dimension: `Σ_{p∈S}(r_p - 1) + [special](i - 1)` equals `|L|` for emitting
//! and `|L| - 1` for absorbing pieces, where `r_p` is the valency at `p`.
//! Emitting pieces are memoized per `(L, S, special)` and absorbing ones per
//! `(L, S, special, start)`; the curve is assembled around point `0`, all of
//! whose edges lead into absorbing pieces.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{Signed, ToPrimitive, Zero};

use super::PointConfig;
use crate::error::{Error, Result};
use crate::lattice::Degree;
use crate::linalg::Q;
use crate::trees::{Mark, MarkedTreeType, Node, TreeShape, VType};

/// Exact point with a floating-point shadow used to discard most ray pairs
/// before any exact arithmetic. Equality and hashing use the exact value.
#[derive(Clone, Debug)]
struct P2 {
    exact: [Q; 2],
    approx: [f64; 2],
}

impl P2 {
    fn new(exact: [Q; 2]) -> Self {
        let approx = [exact[0].to_f64().unwrap_or(f64::NAN), exact[1].to_f64().unwrap_or(f64::NAN)];
        P2 { exact, approx }
    }
}

impl PartialEq for P2 {
    fn eq(&self, other: &Self) -> bool {
        self.exact == other.exact
    }
}

impl Eq for P2 {}

impl std::hash::Hash for P2 {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.exact.hash(h)
    }
}

/// A piece of a curve, flagged when some vertex inside it sits exactly on
/// the start of a ray (a degenerate configuration if the piece is used).
struct Piece {
    kind: PieceKind,
    touching: bool,
}

impl Piece {
    fn new(kind: PieceKind, own: bool) -> Rc<Piece> {
        let touching = own
            || match &kind {
                PieceKind::End(_) => false,
                PieceKind::Meet { other, outs } => other.touching || outs.iter().any(|o| o.touching),
                PieceKind::FromPoint { outs, .. } => outs.iter().any(|o| o.touching),
                PieceKind::FromVertex { ins, outs } => ins.iter().chain(outs).any(|o| o.touching),
            };
        Rc::new(Piece { kind, touching })
    }
}

enum PieceKind {
    /// Absorbing: the end carrying this leaf.
    End(usize),
    /// Absorbing: the incoming ray meets the emitting ray `other`.
    Meet { other: Rc<Piece>, outs: Vec<Rc<Piece>> },
    /// Emitting: the ray starts at point `p`.
    FromPoint { p: usize, outs: Vec<Rc<Piece>> },
    /// Emitting: the ray starts where two emitting rays meet.
    FromVertex { ins: [Rc<Piece>; 2], outs: Vec<Rc<Piece>> },
}

#[derive(Clone)]
struct Ray {
    start: P2,
    piece: Rc<Piece>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Emit,
    Absorb,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Role {
    kind: Kind,
    special: bool,
}

const fn role(kind: Kind, special: bool) -> Role {
    Role { kind, special }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            b
        })
    })
}

/// Nonempty submasks of `mask`, in decreasing order.
fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut cur = Some(mask);
    std::iter::from_fn(move || {
        let s = cur?;
        if s == 0 {
            return None;
        }
        cur = Some((s - 1) & mask);
        Some(s)
    })
}

fn all_submasks(mask: u64) -> impl Iterator<Item = u64> {
    submasks(mask).chain(std::iter::once(0))
}

fn cross(a: &[Q; 2], b: &[Q; 2]) -> Q {
    &a[0] * &b[1] - &a[1] * &b[0]
}

fn qdir(d: [i64; 2]) -> [Q; 2] {
    [Q::from_integer(d[0].into()), Q::from_integer(d[1].into())]
}

/// Common point of the rays `p + t·d` and `q + s·e` (`t, s >= 0`), flagged
/// when it is the start of one of them. Parallel rays never meet, even on a
/// common line: any small move of the points separates them, so they cannot
/// carry a vertex of a curve through nearby generic points.
fn meet(p: &P2, d: [i64; 2], q: &P2, e: [i64; 2]) -> Option<(P2, bool)> {
    let det = d[0] * e[1] - d[1] * e[0];
    if det == 0 {
        return None;
    }
    if surely_apart(p, d, q, e, det) {
        return None;
    }
    let (dq, eq) = (qdir(d), qdir(e));
    let det = Q::from_integer(det.into());
    let (p, q) = (&p.exact, &q.exact);
    let w = [&q[0] - &p[0], &q[1] - &p[1]];
    let t = cross(&w, &eq) / &det;
    let s = cross(&w, &dq) / &det;
    if t.is_negative() || s.is_negative() {
        return None;
    }
    let touching = t.is_zero() || s.is_zero();
    Some((P2::new([&p[0] + &t * &dq[0], &p[1] + &t * &dq[1]]), touching))
}

/// `true` when floating point proves that one of the ray parameters is
/// negative. The products are compared against a generous bound on their
/// rounding error, so an uncertain sign never discards a pair.
fn surely_apart(p: &P2, d: [i64; 2], q: &P2, e: [i64; 2], det: i64) -> bool {
    let w = [q.approx[0] - p.approx[0], q.approx[1] - p.approx[1]];
    let scale = p.approx[0].abs() + p.approx[1].abs() + q.approx[0].abs() + q.approx[1].abs() + 1.0;
    if !scale.is_finite() {
        return false;
    }
    let negative = |a: [i64; 2]| {
        let (x, y) = (w[0] * a[1] as f64, w[1] * a[0] as f64);
        let num = x - y;
        let err = 1e-9 * scale * (a[0].abs() + a[1].abs()) as f64;
        // sign of the parameter is sign(num) * sign(det)
        num * (det.signum() as f64) < -err
    };
    negative(e) || negative(d)
}

struct Search<'a> {
    pts: &'a [P2],
    /// Valency at each point (2 for points inside edges).
    r: Vec<usize>,
    /// Index `i` of the special unmarked vertex of valency `i + 2`.
    special: Option<usize>,
    /// Sum of the degree vectors over every leaf subset.
    dir_table: Vec<[i64; 2]>,
    emit_memo: HashMap<(u64, u64, bool), Rc<Vec<Ray>>>,
    block_memo: HashMap<(u64, u64, Vec<Role>), Rc<Vec<Vec<(u64, u64)>>>>,
    absorb_memo: HashMap<(u64, u64, bool, P2), Rc<Vec<Rc<Piece>>>>,
}

impl<'a> Search<'a> {
    fn new(dirs: &[[i64; 2]], pts: &'a [P2], r: Vec<usize>, special: Option<usize>) -> Self {
        let mut dir_table = vec![[0i64, 0]; 1 << dirs.len()];
        for mask in 1..dir_table.len() {
            let b = mask.trailing_zeros() as usize;
            let rest = dir_table[mask & (mask - 1)];
            dir_table[mask] = [rest[0] + dirs[b][0], rest[1] + dirs[b][1]];
        }
        Search {
            pts,
            r,
            special,
            dir_table,
            emit_memo: HashMap::new(),
            block_memo: HashMap::new(),
            absorb_memo: HashMap::new(),
        }
    }

    fn dir(&self, l: u64) -> [i64; 2] {
        self.dir_table[l as usize]
    }

    fn weight(&self, s: u64, special: bool) -> usize {
        bits(s).map(|p| self.r[p] - 1).sum::<usize>() + if special { self.special.unwrap() - 1 } else { 0 }
    }

    fn fits(&self, l: u64, s: u64, r: Role) -> bool {
        let need = l.count_ones() as usize - usize::from(r.kind == Kind::Absorb);
        self.weight(s, r.special) == need
    }

    /// Unordered partitions of `(l, s)` into blocks with the given roles
    /// (blocks with equal roles are ordered by their smallest leaf).
    fn blocks(&mut self, l: u64, s: u64, roles: &[Role]) -> Rc<Vec<Vec<(u64, u64)>>> {
        let key = (l, s, roles.to_vec());
        if let Some(b) = self.block_memo.get(&key) {
            return b.clone();
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(roles.len());
        self.blocks_rec(l, s, roles, &mut cur, &mut out);
        let out = Rc::new(out);
        self.block_memo.insert(key, out.clone());
        out
    }

    fn blocks_rec(&self, l: u64, s: u64, roles: &[Role], cur: &mut Vec<(u64, u64)>, out: &mut Vec<Vec<(u64, u64)>>) {
        let k = cur.len();
        if k == roles.len() {
            if l == 0 && s == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if l == 0 {
            return;
        }
        let last = k + 1 == roles.len();
        let min_after = match cur.last() {
            Some(&(pl, _)) if roles[k - 1] == roles[k] => pl.trailing_zeros(),
            _ => 0,
        };
        let lsets: Vec<u64> = if last { vec![l] } else { submasks(l).collect() };
        for bl in lsets {
            if k > 0 && roles[k - 1] == roles[k] && bl.trailing_zeros() <= min_after {
                continue;
            }
            let ssets: Vec<u64> = if last { vec![s] } else { all_submasks(s).collect() };
            for bs in ssets {
                if !self.fits(bl, bs, roles[k]) {
                    continue;
                }
                cur.push((bl, bs));
                self.blocks_rec(l & !bl, s & !bs, roles, cur, out);
                cur.pop();
            }
        }
    }

    /// All ways to complete the absorbing blocks from a common start.
    fn absorb_all(&mut self, blocks: &[(u64, u64)], flags: &[bool], start: &P2) -> Vec<Vec<Rc<Piece>>> {
        let mut combos: Vec<Vec<Rc<Piece>>> = vec![Vec::new()];
        for (&(bl, bs), &f) in blocks.iter().zip(flags) {
            let r = self.absorbing(bl, bs, f, start);
            if r.is_empty() {
                return Vec::new();
            }
            combos = combos
                .into_iter()
                .flat_map(|c| {
                    r.iter().map(move |o| {
                        let mut c = c.clone();
                        c.push(o.clone());
                        c
                    })
                })
                .collect();
        }
        combos
    }

    fn emitting(&mut self, l: u64, s: u64, special: bool) -> Rc<Vec<Ray>> {
        if let Some(r) = self.emit_memo.get(&(l, s, special)) {
            return r.clone();
        }
        let mut rays = Vec::new();
        if self.dir(l) != [0, 0] {
            // the ray starts at one of the points
            for p in bits(s) {
                let mut roles = vec![role(Kind::Absorb, false); self.r[p] - 1];
                roles[0].special = special;
                let flags: Vec<bool> = roles.iter().map(|r| r.special).collect();
                let start = self.pts[p].clone();
                let split = self.blocks(l, s & !(1 << p), &roles);
                for bl in split.iter() {
                    for outs in self.absorb_all(&bl, &flags, &start) {
                        let piece = Piece::new(PieceKind::FromPoint { p, outs }, false);
                        rays.push(Ray { start: start.clone(), piece });
                    }
                }
            }
            // the ray starts where two emitting rays meet
            let mut shapes = vec![vec![role(Kind::Emit, special), role(Kind::Emit, false)]];
            if special {
                let mut v = vec![role(Kind::Emit, false); 2];
                v.extend(std::iter::repeat(role(Kind::Absorb, false)).take(self.special.unwrap() - 1));
                shapes.push(v);
            }
            for roles in shapes {
                let flags: Vec<bool> = roles[2..].iter().map(|r| r.special).collect();
                let split = self.blocks(l, s, &roles);
                for bl in split.iter() {
                    let r1 = self.emitting(bl[0].0, bl[0].1, roles[0].special);
                    if r1.is_empty() {
                        continue;
                    }
                    let r2 = self.emitting(bl[1].0, bl[1].1, roles[1].special);
                    let (d1, d2) = (self.dir(bl[0].0), self.dir(bl[1].0));
                    let (d1, d2) = ([-d1[0], -d1[1]], [-d2[0], -d2[1]]);
                    for a in r1.iter() {
                        for b in r2.iter() {
                            let Some((v, touch)) = meet(&a.start, d1, &b.start, d2) else { continue };
                            for outs in self.absorb_all(&bl[2..], &flags, &v) {
                                let ins = [a.piece.clone(), b.piece.clone()];
                                let piece = Piece::new(PieceKind::FromVertex { ins, outs }, touch);
                                rays.push(Ray { start: v.clone(), piece });
                            }
                        }
                    }
                }
            }
        }
        let rays = Rc::new(rays);
        self.emit_memo.insert((l, s, special), rays.clone());
        rays
    }

    fn absorbing(&mut self, l: u64, s: u64, special: bool, start: &P2) -> Rc<Vec<Rc<Piece>>> {
        if l.count_ones() == 1 && s == 0 && !special {
            return Rc::new(vec![Piece::new(PieceKind::End(l.trailing_zeros() as usize), false)]);
        }
        let key = (l, s, special, start.clone());
        if let Some(r) = self.absorb_memo.get(&key) {
            return r.clone();
        }
        let d = self.dir(l);
        let mut out = Vec::new();
        if d != [0, 0] {
            let mut shapes = vec![vec![role(Kind::Emit, false), role(Kind::Absorb, special)]];
            if special {
                shapes.push(vec![role(Kind::Emit, true), role(Kind::Absorb, false)]);
                let mut v = vec![role(Kind::Emit, false)];
                v.extend(std::iter::repeat(role(Kind::Absorb, false)).take(self.special.unwrap()));
                shapes.push(v);
            }
            for roles in shapes {
                let flags: Vec<bool> = roles[1..].iter().map(|r| r.special).collect();
                let split = self.blocks(l, s, &roles);
                for bl in split.iter() {
                    let rays = self.emitting(bl[0].0, bl[0].1, roles[0].special);
                    let e = self.dir(bl[0].0);
                    for ray in rays.iter() {
                        let Some((v, touch)) = meet(start, d, &ray.start, [-e[0], -e[1]]) else { continue };
                        for outs in self.absorb_all(&bl[1..], &flags, &v) {
                            out.push(Piece::new(PieceKind::Meet { other: ray.piece.clone(), outs }, touch));
                        }
                    }
                }
            }
        }
        let out = Rc::new(out);
        self.absorb_memo.insert(key, out.clone());
        out
    }

    /// Complete curves: all edges at point 0 lead into absorbing pieces.
    fn roots(&mut self, n_leaves: usize) -> Vec<Vec<Rc<Piece>>> {
        let mut roles = vec![role(Kind::Absorb, false); self.r[0]];
        roles[0].special = self.special.is_some();
        let flags: Vec<bool> = roles.iter().map(|r| r.special).collect();
        let all_l = (1u64 << n_leaves) - 1;
        let all_s = ((1u64 << self.pts.len()) - 1) & !1;
        let start = self.pts[0].clone();
        let mut out = Vec::new();
        let split = self.blocks(all_l, all_s, &roles);
                for bl in split.iter() {
            out.extend(self.absorb_all(&bl, &flags, &start));
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum GNode {
    Leaf(usize),
    Point(usize),
    Vertex(usize),
}

#[derive(Default)]
struct Graph {
    edges: Vec<(GNode, GNode)>,
    n_unmarked: usize,
}

impl Graph {
    fn absorbing(&mut self, piece: &Piece, parent: GNode) {
        match &piece.kind {
            PieceKind::End(l) => self.edges.push((parent, GNode::Leaf(*l))),
            PieceKind::Meet { other, outs } => {
                let v = GNode::Vertex(self.n_unmarked);
                self.n_unmarked += 1;
                self.edges.push((parent, v));
                self.emitting(other, v);
                outs.iter().for_each(|o| self.absorbing(o, v));
            }
            _ => unreachable!("emitting piece in absorbing position"),
        }
    }

    fn emitting(&mut self, piece: &Piece, child: GNode) {
        match &piece.kind {
            PieceKind::FromPoint { p, outs } => {
                self.edges.push((GNode::Point(*p), child));
                outs.iter().for_each(|o| self.absorbing(o, GNode::Point(*p)));
            }
            PieceKind::FromVertex { ins, outs } => {
                let v = GNode::Vertex(self.n_unmarked);
                self.n_unmarked += 1;
                self.edges.push((v, child));
                ins.iter().for_each(|i| self.emitting(i, v));
                outs.iter().for_each(|o| self.absorbing(o, v));
            }
            _ => unreachable!("absorbing piece in emitting position"),
        }
    }

    /// Marked type: points of valency 2 become edge marks.
    fn into_type(self, degree: &Degree, r: &[usize]) -> MarkedTreeType {
        let n = r.len();
        let mut id = HashMap::new();
        let mut nv = self.n_unmarked;
        for v in 0..self.n_unmarked {
            id.insert(GNode::Vertex(v), Node::Vertex(v));
        }
        for p in (0..n).filter(|&p| r[p] >= 3) {
            id.insert(GNode::Point(p), Node::Vertex(nv));
            nv += 1;
        }
        let map = |g: GNode| match g {
            GNode::Leaf(l) => Node::Leaf(l),
            other => id[&other],
        };
        let mut through: HashMap<usize, Vec<Node>> = HashMap::new();
        let mut raw = Vec::new();
        for &(a, b) in &self.edges {
            match (a, b) {
                (GNode::Point(p), x) | (x, GNode::Point(p)) if r[p] == 2 => through.entry(p).or_default().push(map(x)),
                _ => raw.push((map(a), map(b))),
            }
        }
        let mut order: Vec<usize> = through.keys().copied().collect();
        order.sort_unstable();
        for p in &order {
            let ends = &through[p];
            raw.push((ends[0], ends[1]));
        }
        let shape = Arc::new(TreeShape::from_edges(degree.len(), nv, &raw));
        let find = |a: Node, b: Node| -> usize {
            match (a, b) {
                (Node::Leaf(l), _) | (_, Node::Leaf(l)) => l,
                (Node::Vertex(u), Node::Vertex(w)) => shape
                    .finite_edges()
                    .find(|&e| shape.edges[e].tail == u.min(w) && shape.edges[e].head == Node::Vertex(u.max(w)))
                    .expect("edge of the assembled tree"),
            }
        };
        let marks = (0..n)
            .map(|p| match id.get(&GNode::Point(p)) {
                Some(Node::Vertex(v)) => Mark::Vertex(*v),
                _ => Mark::Edge { edge: find(through[&p][0], through[&p][1]), slot: 0 },
            })
            .collect();
        MarkedTreeType::new(shape, marks, degree)
    }
}

/// Largest degree handled by the search (leaf subsets are tabulated).
pub const MAX_LEAVES: usize = 20;

/// Distinct assignments of the census' point valencies to the ordered points.
pub fn valency_assignments(vt: &VType) -> Vec<Vec<usize>> {
    let base = vt.point_valencies();
    let n = base.len();
    let set: BTreeSet<Vec<usize>> = (0..n).permutations(n).map(|p| p.iter().map(|&i| base[i]).collect()).collect();
    set.into_iter().collect()
}

/// Every regular type with census `vt` realized through `cfg`, as found by
/// the guided search. The types still have to be solved and weighed.
pub fn regular_types(degree: &Degree, vt: &VType, cfg: &PointConfig) -> Result<Vec<MarkedTreeType>> {
    vt.check_rc(degree.len())?;
    if degree.m != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: degree.m });
    }
    if cfg.len() != vt.n() {
        return Err(Error::DimensionMismatch { expected: vt.n(), got: cfg.len() });
    }
    if degree.len() > MAX_LEAVES {
        return Err(Error::Invalid(format!("the search handles at most {MAX_LEAVES} degree vectors")));
    }
    if !cfg.distinct() {
        return Err(Error::Wall("coinciding points".into()));
    }
    let pts: Vec<P2> = cfg.points.iter().map(|p| P2::new([p[0].clone(), p[1].clone()])).collect();
    let dirs: Vec<[i64; 2]> = degree.vectors.iter().map(|v| [v.0[0], v.0[1]]).collect();
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in valency_assignments(vt) {
        let mut search = Search::new(&dirs, &pts, r.clone(), vt.special());
        for outs in search.roots(degree.len()) {
            if outs.iter().any(|o| o.touching) {
                return Err(Error::Wall("a curve through the points has a vertex at a ray start".into()));
            }
            let mut g = Graph::default();
            outs.iter().for_each(|o| g.absorbing(o, GNode::Point(0)));
            let t = g.into_type(degree, &r);
            if !seen.insert(t.canonical_key()) {
                return Err(Error::Invalid("the search produced a curve twice".into()));
            }
            out.push(t);
        }
    }
    Ok(out)
}
