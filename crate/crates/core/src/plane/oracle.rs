//! Classical count of trivalent curves through points, weighted by the
//! integer vertex multiplicities. It shares no code with the refined
//! machinery: it counts directly with rays and never builds types.

use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive, Zero};

use super::PointConfig;
use crate::error::{Error, Result};
use crate::lattice::Degree;
use crate::linalg::Q;
use crate::trees::symmetry_factor;

/// Exact point and its floating-point approximation.
type P2 = (Q, Q, f64, f64);

fn point(x: Q, y: Q) -> P2 {
    let (fx, fy) = (x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN));
    (x, y, fx, fy)
}

/// Weighted count split into curves that are fine and curves with a vertex
/// exactly at the start of a ray; the latter only matter once complete.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
struct Count {
    clean: u128,
    touching: u128,
}

impl Count {
    fn one() -> Self {
        Count { clean: 1, touching: 0 }
    }

    fn is_zero(self) -> bool {
        self.clean == 0 && self.touching == 0
    }

    fn times(self, o: Count) -> Count {
        let all = (self.clean + self.touching) * (o.clean + o.touching);
        let clean = self.clean * o.clean;
        Count { clean, touching: all - clean }
    }

    fn scale(self, k: u128, touch: bool) -> Count {
        if touch {
            Count { clean: 0, touching: (self.clean + self.touching) * k }
        } else {
            Count { clean: self.clean * k, touching: self.touching * k }
        }
    }

    fn add(self, o: Count) -> Count {
        Count { clean: self.clean + o.clean, touching: self.touching + o.touching }
    }
}

struct Oracle<'a> {
    dirs: Vec<(i64, i64)>,
    pts: &'a [P2],
    /// Emitting rays of `(L, S)` with `|S| = |L|`: start and multiplicity.
    emit: HashMap<(u64, u64), Vec<(P2, Count)>>,
}

fn sum_dir(dirs: &[(i64, i64)], mask: u64) -> (i64, i64) {
    (0..dirs.len()).filter(|b| mask >> b & 1 == 1).fold((0, 0), |a, b| (a.0 + dirs[b].0, a.1 + dirs[b].1))
}

/// Forward intersection of two non-parallel rays, flagged when it is a ray
/// start. Parallel rays never meet.
fn hit(p: &P2, d: (i64, i64), q: &P2, e: (i64, i64)) -> Option<(P2, bool)> {
    let det = d.0 * e.1 - d.1 * e.0;
    if det != 0 {
        // discard pairs whose parameters are certainly negative
        let (wx, wy) = (q.2 - p.2, q.3 - p.3);
        let size = p.2.abs() + p.3.abs() + q.2.abs() + q.3.abs() + 1.0;
        let neg = |a: (i64, i64)| {
            let num = wx * a.1 as f64 - wy * a.0 as f64;
            num * (det.signum() as f64) < -1e-9 * size * (a.0.abs() + a.1.abs()) as f64
        };
        if size.is_finite() && (neg(e) || neg(d)) {
            return None;
        }
    }
    let (wx, wy) = (&q.0 - &p.0, &q.1 - &p.1);
    let (dx, dy) = (Q::from_integer(d.0.into()), Q::from_integer(d.1.into()));
    let (ex, ey) = (Q::from_integer(e.0.into()), Q::from_integer(e.1.into()));
    if det == 0 {
        return None;
    }
    let det = Q::from_integer(det.into());
    let t = (&wx * &ey - &wy * &ex) / &det;
    let s = (&wx * &dy - &wy * &dx) / &det;
    if t.is_negative() || s.is_negative() {
        return None;
    }
    let touch = t.is_zero() || s.is_zero();
    Some((point(&p.0 + &t * &dx, &p.1 + &t * &dy), touch))
}

fn det_abs(a: (i64, i64), b: (i64, i64)) -> u128 {
    (a.0 * b.1 - a.1 * b.0).unsigned_abs() as u128
}

impl<'a> Oracle<'a> {
    fn rays(&mut self, l: u64, s: u64) -> Vec<(P2, Count)> {
        if let Some(r) = self.emit.get(&(l, s)) {
            return r.clone();
        }
        let d = sum_dir(&self.dirs, l);
        let mut out = Vec::new();
        if d != (0, 0) {
            for p in (0..self.pts.len()).filter(|p| s >> p & 1 == 1) {
                let m = self.absorb(l, s & !(1 << p), &self.pts[p].clone());
                if !m.is_zero() {
                    out.push((self.pts[p].clone(), m));
                }
            }
            let low = l & l.wrapping_neg();
            let rest = l & !low;
            let mut sub = rest;
            loop {
                let l1 = low | sub;
                let l2 = l & !l1;
                if l2 != 0 {
                    let mut t = s;
                    loop {
                        if t.count_ones() == l1.count_ones() && (s & !t).count_ones() == l2.count_ones() {
                            let r1 = self.rays(l1, t);
                            let r2 = if r1.is_empty() { Vec::new() } else { self.rays(l2, s & !t) };
                            let (d1, d2) = (sum_dir(&self.dirs, l1), sum_dir(&self.dirs, l2));
                            let (n1, n2) = ((-d1.0, -d1.1), (-d2.0, -d2.1));
                            for (a, ma) in &r1 {
                                for (b, mb) in &r2 {
                                    if let Some((v, touch)) = hit(a, n1, b, n2) {
                                        out.push((v, ma.times(*mb).scale(det_abs(d1, d2), touch)));
                                    }
                                }
                            }
                        }
                        if t == 0 {
                            break;
                        }
                        t = (t - 1) & s;
                    }
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & rest;
            }
        }
        self.emit.insert((l, s), out.clone());
        out
    }

    /// Weighted number of ways to finish a ray entering `(L, S)` with
    /// `|S| = |L| - 1`.
    fn absorb(&mut self, l: u64, s: u64, start: &P2) -> Count {
        if l.count_ones() == 1 {
            return if s == 0 { Count::one() } else { Count::default() };
        }
        let d = sum_dir(&self.dirs, l);
        if d == (0, 0) {
            return Count::default();
        }
        let mut total = Count::default();
        let mut l1 = l;
        while l1 != 0 {
            let l2 = l & !l1;
            if l2 != 0 {
                let mut t = s;
                loop {
                    if t.count_ones() == l1.count_ones() {
                        let e = sum_dir(&self.dirs, l1);
                        for (b, mb) in self.rays(l1, t) {
                            if let Some((v, touch)) = hit(start, d, &b, (-e.0, -e.1)) {
                                let rest = self.absorb(l2, s & !t, &v);
                                total = total.add(mb.times(rest).scale(det_abs(d, e), touch));
                            }
                        }
                    }
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & s;
                }
            }
            l1 = (l1 - 1) & l;
        }
        total
    }
}

/// Number of trivalent rational curves of degree `degree` through the `|Δ|-1`
/// points, counted with multiplicity `Π |a_1 ∧ a_2|` and divided by `|G|`.
pub fn classical_count_oracle(degree: &Degree, cfg: &PointConfig) -> Result<u128> {
    let n = degree.len().saturating_sub(1);
    if degree.m != 2 || cfg.len() != n || n < 2 {
        return Err(Error::DimensionMismatch { expected: n, got: cfg.len() });
    }
    if !cfg.distinct() {
        return Err(Error::Wall("coinciding points".into()));
    }
    let pts: Vec<P2> = cfg.points.iter().map(|p| point(p[0].clone(), p[1].clone())).collect();
    let dirs = degree.vectors.iter().map(|v| (v.0[0], v.0[1])).collect();
    let mut o = Oracle { dirs, pts: &pts, emit: HashMap::new() };
    let all = (1u64 << degree.len()) - 1;
    let others = ((1u64 << n) - 1) & !1;
    // point 0 sits inside an edge: split the leaves between its two sides
    let mut total = Count::default();
    let mut l1 = (all - 1) & all;
    while l1 != 0 {
        if l1 & 1 == 1 {
            let l2 = all & !l1;
            let mut t = others;
            loop {
                if t.count_ones() + 1 == l1.count_ones() && (others & !t).count_ones() + 1 == l2.count_ones() {
                    let a = o.absorb(l1, t, &pts[0]);
                    if !a.is_zero() {
                        total = total.add(a.times(o.absorb(l2, others & !t, &pts[0])));
                    }
                }
                if t == 0 {
                    break;
                }
                t = (t - 1) & others;
            }
        }
        l1 = (l1 - 1) & all;
    }
    if total.touching > 0 {
        return Err(Error::Wall("a curve through the points has a vertex at a ray start".into()));
    }
    let g = u128::from(symmetry_factor(degree));
    if total.clean % g != 0 {
        return Err(Error::NotDivisible(symmetry_factor(degree)));
    }
    Ok(total.clean / g)
}
