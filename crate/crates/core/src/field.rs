//! Lazy, consistent realization of the marked Poisson field.
//!
//! Every contour instance γ carries an independent marked Poisson process of
//! birth times with rate `exp(-beta |γ|)`; each birth carries a mean-one
//! exponential lifetime, and the triple (basis, birth, lifetime) is a
//! cylinder. The realization is generated on demand from streams keyed by
//! `(seed, instance, time cell)`, so any query sequence, in any order, sees
//! the same field.
//!
//! Negative time is realized in two consistent layers per instance: the
//! cylinders still alive at time 0 (a Poisson set with mean equal to the
//! birth rate, with exponential ages and memoryless residual lifetimes), and
//! per-cell births that die before 0. Their union restores the plain marked
//! Poisson law on every window, while letting the backward samplers read the
//! exact time-0 section without scanning unboundedly far into the past.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;
use std::sync::Arc;

use crate::lattice::{Catalog, Instance};
use crate::rng::{domain, Stream};

/// A space-time event: a contour instance alive on `[birth, birth+lifetime]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cylinder {
    pub basis: Instance,
    pub birth: f64,
    pub lifetime: f64,
    /// Stream domain that produced this cylinder (stable identifier part).
    pub domain: u64,
    /// Time cell index within the domain.
    pub cell: i64,
    /// Draw index within the cell.
    pub seq: u32,
}

impl Cylinder {
    pub fn death(&self) -> f64 {
        self.birth + self.lifetime
    }

    pub fn life_contains(&self, t: f64) -> bool {
        self.birth <= t && t <= self.death()
    }

    /// Stable identity of the cylinder inside one field realization.
    pub fn id(&self) -> (Instance, u64, i64, u32) {
        (self.basis, self.domain, self.cell, self.seq)
    }

    /// Deterministic ordering: birth time, then canonical identity.
    pub fn order_key(&self) -> (f64, Instance, u64, i64, u32) {
        (self.birth, self.basis, self.domain, self.cell, self.seq)
    }
}

pub fn sort_by_birth(cylinders: &mut [Cylinder]) {
    cylinders.sort_by(|a, b| a.order_key().partial_cmp(&b.order_key()).unwrap());
}

/// Debug dump: one `class,dx,dy,birth,death` line per cylinder.
pub fn dump_cylinders(cylinders: &[Cylinder]) -> String {
    let mut out = String::new();
    for c in cylinders {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.basis.class.0,
            c.basis.shift.x,
            c.basis.shift.y,
            c.birth,
            c.death()
        );
    }
    out
}

/// One realization of the field: a deterministic function of
/// `(seed, beta, cell_width)` over the catalog's contour instances.
pub struct FieldRealization {
    catalog: Arc<Catalog>,
    beta: f64,
    seed: u64,
    cell_width: f64,
    survivors: HashMap<Instance, Rc<[Cylinder]>>,
    cells: HashMap<(Instance, i64), Rc<[Cylinder]>>,
}

impl FieldRealization {
    pub fn new(catalog: Arc<Catalog>, beta: f64, seed: u64) -> FieldRealization {
        FieldRealization::with_cell_width(catalog, beta, seed, 1.0)
    }

    pub fn with_cell_width(
        catalog: Arc<Catalog>,
        beta: f64,
        seed: u64,
        cell_width: f64,
    ) -> FieldRealization {
        assert!(cell_width > 0.0);
        FieldRealization {
            catalog,
            beta,
            seed,
            cell_width,
            survivors: HashMap::new(),
            cells: HashMap::new(),
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    /// Birth rate of the instance, `exp(-beta |γ|)`.
    pub fn rate(&self, inst: Instance) -> f64 {
        (-self.beta * self.catalog.length_of(inst) as f64).exp()
    }

    fn key_words(inst: Instance, cell: i64) -> [u64; 4] {
        [
            inst.class.0 as u64,
            inst.shift.x as i64 as u64,
            inst.shift.y as i64 as u64,
            cell as u64,
        ]
    }

    /// Cylinders of basis `inst` alive at time 0, ordered by birth. Count is
    /// Poisson with mean `rate`, ages are mean-one exponentials, residual
    /// lifetimes are fresh mean-one exponentials.
    pub fn survivors_at_zero(&mut self, inst: Instance) -> Rc<[Cylinder]> {
        if let Some(s) = self.survivors.get(&inst) {
            return s.clone();
        }
        let lambda = self.rate(inst);
        let mut stream = Stream::keyed(self.seed, domain::SURVIVOR, &Self::key_words(inst, 0));
        let n = stream.poisson(lambda);
        let mut out = Vec::with_capacity(n as usize);
        for seq in 0..n {
            let age = stream.exp1();
            let residual = stream.exp1();
            out.push(Cylinder {
                basis: inst,
                birth: -age,
                lifetime: age + residual,
                domain: domain::SURVIVOR,
                cell: 0,
                seq,
            });
        }
        sort_by_birth(&mut out);
        let rc: Rc<[Cylinder]> = out.into();
        self.survivors.insert(inst, rc.clone());
        rc
    }

    /// All cylinders of basis `inst` born in cell `k`, i.e. in
    /// `[k*w, (k+1)*w)`, ordered by birth.
    pub fn cell(&mut self, inst: Instance, k: i64) -> Rc<[Cylinder]> {
        if let Some(c) = self.cells.get(&(inst, k)) {
            return c.clone();
        }
        let mut out = if k >= 0 {
            self.forward_cell(inst, k)
        } else {
            let mut v = self.backward_rest(inst, k);
            let w = self.cell_width;
            for c in self.survivors_at_zero(inst).iter() {
                if (c.birth / w).floor() as i64 == k {
                    v.push(*c);
                }
            }
            v
        };
        sort_by_birth(&mut out);
        let rc: Rc<[Cylinder]> = out.into();
        self.cells.insert((inst, k), rc.clone());
        rc
    }

    /// Plain Poisson cell for t >= 0: uniform births, exponential lifetimes.
    fn forward_cell(&self, inst: Instance, k: i64) -> Vec<Cylinder> {
        debug_assert!(k >= 0);
        let w = self.cell_width;
        let a = k as f64 * w;
        let lambda = self.rate(inst) * w;
        let mut stream = Stream::keyed(self.seed, domain::CELL, &Self::key_words(inst, k));
        let n = stream.poisson(lambda);
        (0..n)
            .map(|seq| Cylinder {
                basis: inst,
                birth: a + stream.uniform() * w,
                lifetime: stream.exp1(),
                domain: domain::CELL,
                cell: k,
                seq,
            })
            .collect()
    }

    /// Births in a negative cell whose lifetime ends before 0. Together with
    /// the survivor layer this restores the full marked Poisson law: births
    /// at time t < 0 split into survivors (probability e^t) and the rest.
    fn backward_rest(&self, inst: Instance, k: i64) -> Vec<Cylinder> {
        debug_assert!(k < 0);
        let w = self.cell_width;
        let a = k as f64 * w;
        let b = (k + 1) as f64 * w;
        let rate = self.rate(inst);
        // mass of (1 - e^t) dt over [a, b)
        let mass = rate * ((b - a) - (b.exp() - a.exp()));
        let mut stream =
            Stream::keyed(self.seed, domain::BACKWARD_CELL, &Self::key_words(inst, k));
        let n = stream.poisson(mass);
        (0..n)
            .map(|seq| {
                let u = stream.uniform();
                let birth = invert_rest_cdf(a, b, u);
                let lifetime = stream.exp1_below(-birth);
                Cylinder {
                    basis: inst,
                    birth,
                    lifetime,
                    domain: domain::BACKWARD_CELL,
                    cell: k,
                    seq,
                }
            })
            .collect()
    }

    /// Cylinders of basis `inst` born in `[s, t)`, ordered by birth.
    /// Survivors older than the window are not included; the time-0 section
    /// of arbitrary age comes from [`FieldRealization::survivors_at_zero`].
    pub fn cylinders_in(&mut self, inst: Instance, s: f64, t: f64) -> Vec<Cylinder> {
        assert!(s < t);
        let w = self.cell_width;
        let k0 = (s / w).floor() as i64;
        let k1 = ((t / w).ceil() as i64).max(k0 + 1);
        let mut out = Vec::new();
        for k in k0..k1 {
            for c in self.cell(inst, k).iter() {
                if c.birth >= s && c.birth < t {
                    out.push(*c);
                }
            }
        }
        out
    }

    /// Lifetime attached to the i-th copy of `inst` in an initial
    /// configuration; the cylinder is born at time 0.
    pub fn initial_cylinder(&self, inst: Instance, copy: u32) -> Cylinder {
        let mut stream = Stream::keyed(
            self.seed,
            domain::INITIAL,
            &Self::key_words(inst, copy as i64),
        );
        Cylinder {
            basis: inst,
            birth: 0.0,
            lifetime: stream.exp1(),
            domain: domain::INITIAL,
            cell: copy as i64,
            seq: 0,
        }
    }

    /// Free-network counts at time `t >= 0`: for each instance in `region`,
    /// the number of cylinders among the initial ones and those born in
    /// `[0, t]` whose life contains `t`. All births are accepted.
    pub fn free_state(
        &mut self,
        initial: &[(Instance, u32)],
        t: f64,
        region: &[Instance],
    ) -> Vec<(Instance, u32)> {
        assert!(t >= 0.0);
        let mut counts: Vec<(Instance, u32)> = region.iter().map(|&g| (g, 0)).collect();
        for (g, n) in counts.iter_mut() {
            if let Some(&(_, copies)) = initial.iter().find(|(inst, _)| *inst == *g) {
                for copy in 0..copies {
                    if self.initial_cylinder(*g, copy).life_contains(t) {
                        *n += 1;
                    }
                }
            }
            for c in self.cylinders_in(*g, 0.0, t + self.cell_width) {
                if c.birth <= t && c.life_contains(t) {
                    *n += 1;
                }
            }
        }
        counts
    }
}

/// Invert the CDF of density ∝ (1 - e^t) on [a, b), b <= 0, by bisection.
fn invert_rest_cdf(a: f64, b: f64, u: f64) -> f64 {
    let total = (b - a) - (b.exp() - a.exp());
    let target = u * total;
    let f = |t: f64| (t - a) - (t.exp() - a.exp());
    let (mut lo, mut hi) = (a, b);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ClassId, Point};
    use crate::rng::replica_seed;

    fn catalog() -> Arc<Catalog> {
        Arc::new(Catalog::build(8).unwrap())
    }

    fn square(x: i32, y: i32) -> Instance {
        Instance { class: ClassId(0), shift: Point::new(x, y) }
    }

    #[test]
    fn repeated_queries_agree() {
        let cat = catalog();
        let mut f = FieldRealization::new(cat, 0.5, 42);
        let g = square(0, 0);
        let a = f.cylinders_in(g, -3.0, 5.0);
        let b = f.cylinders_in(g, -3.0, 5.0);
        assert_eq!(a, b);
        // Overlapping windows agree on the intersection.
        let c = f.cylinders_in(g, -1.0, 2.0);
        let inner: Vec<Cylinder> =
            a.into_iter().filter(|cy| cy.birth >= -1.0 && cy.birth < 2.0).collect();
        assert_eq!(c, inner);
    }

    #[test]
    fn query_order_does_not_matter() {
        let cat = catalog();
        let g = square(0, 0);
        let h = square(3, 3);
        let mut f1 = FieldRealization::new(cat.clone(), 0.5, 7);
        let mut f2 = FieldRealization::new(cat, 0.5, 7);
        let a1 = f1.cylinders_in(g, -2.0, 2.0);
        let b1 = f1.cylinders_in(h, -2.0, 2.0);
        let s1 = f1.survivors_at_zero(g);
        // Reverse order on the second realization.
        let s2 = f2.survivors_at_zero(g);
        let b2 = f2.cylinders_in(h, -2.0, 2.0);
        let a2 = f2.cylinders_in(g, -2.0, 2.0);
        assert_eq!(a1, a2);
        assert_eq!(b1, b2);
        assert_eq!(&*s1, &*s2);
    }

    #[test]
    fn distinct_seeds_differ() {
        let cat = catalog();
        let g = square(0, 0);
        let mut f1 = FieldRealization::new(cat.clone(), 0.25, 1);
        let mut f2 = FieldRealization::new(cat, 0.25, 2);
        assert_ne!(f1.cylinders_in(g, 0.0, 200.0), f2.cylinders_in(g, 0.0, 200.0));
    }

    #[test]
    fn birth_counts_match_the_rate() {
        let cat = catalog();
        let beta = 0.75;
        let mut f = FieldRealization::new(cat, beta, 11);
        let g = square(0, 0);
        let windows = 100_000;
        let n = f.cylinders_in(g, 0.0, windows as f64).len() as f64;
        let lambda = (-beta * 4.0).exp();
        let mean = n / windows as f64;
        let sigma = (lambda / windows as f64).sqrt();
        assert!(
            (mean - lambda).abs() < 3.0 * sigma,
            "mean {mean}, lambda {lambda}, sigma {sigma}"
        );
    }

    #[test]
    fn huge_beta_freezes_the_field() {
        let cat = catalog();
        let mut f = FieldRealization::new(cat, 50.0, 3);
        assert!(f.cylinders_in(square(0, 0), 0.0, 1.0).is_empty());
        assert!(f.survivors_at_zero(square(0, 0)).is_empty());
    }

    #[test]
    fn counts_across_instances_are_uncorrelated() {
        let cat = catalog();
        let beta = 0.4;
        let g = square(0, 0);
        let h = square(1, 0);
        let reps = 4000usize;
        let (mut sx, mut sy, mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for r in 0..reps {
            let mut f =
                FieldRealization::new(cat.clone(), beta, replica_seed(99, r as u64));
            let x = f.cylinders_in(g, 0.0, 1.0).len() as f64;
            let y = f.cylinders_in(h, 0.0, 1.0).len() as f64;
            sx += x;
            sy += y;
            sxy += x * y;
            sxx += x * x;
            syy += y * y;
        }
        let n = reps as f64;
        let cov = sxy / n - (sx / n) * (sy / n);
        let vx = sxx / n - (sx / n) * (sx / n);
        let vy = syy / n - (sy / n) * (sy / n);
        let sigma = (vx * vy / n).sqrt();
        assert!(cov.abs() < 3.0 * sigma, "cov {cov}, sigma {sigma}");
    }

    #[test]
    fn residual_lifetimes_are_memoryless() {
        // Cylinders born in [0, T] and alive at T have Exp(1) residuals;
        // Kolmogorov-Smirnov at the 1% level.
        let cat = catalog();
        let beta = 0.25;
        let t = 10.0;
        let mut residuals = Vec::new();
        let mut r = 0u64;
        while residuals.len() < 10_000 {
            let mut f = FieldRealization::new(cat.clone(), beta, replica_seed(5, r));
            for dx in 0..14 {
                for dy in 0..14 {
                    for c in f.cylinders_in(square(dx, dy), 0.0, t) {
                        if c.life_contains(t) {
                            residuals.push(c.death() - t);
                        }
                    }
                }
            }
            r += 1;
        }
        residuals.truncate(10_000);
        residuals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = residuals.len() as f64;
        let mut d: f64 = 0.0;
        for (i, x) in residuals.iter().enumerate() {
            let cdf = 1.0 - (-x).exp();
            let hi = (i as f64 + 1.0) / n - cdf;
            let lo = cdf - i as f64 / n;
            d = d.max(hi.max(lo));
        }
        let critical = 1.628 / n.sqrt();
        assert!(d < critical, "KS statistic {d}, critical {critical}");
    }

    #[test]
    fn survivor_layer_matches_poisson_time_zero_law() {
        // Mean and variance of the time-0 section match Poisson(rate).
        let cat = catalog();
        let beta = 0.3;
        let g = square(0, 0);
        let lambda = (-beta * 4.0f64).exp();
        let reps = 20_000usize;
        let (mut s, mut ss) = (0.0, 0.0);
        for r in 0..reps {
            let mut f =
                FieldRealization::new(cat.clone(), beta, replica_seed(17, r as u64));
            let k = f.survivors_at_zero(g).len() as f64;
            s += k;
            ss += k * k;
        }
        let n = reps as f64;
        let mean = s / n;
        let var = ss / n - mean * mean;
        assert!((mean - lambda).abs() < 3.0 * (lambda / n).sqrt());
        assert!((var - lambda).abs() < 4.0 * (lambda / n).sqrt());
    }

    #[test]
    fn backward_window_law_matches_forward_window_law() {
        // The survivor/rest split over a backward window must reproduce the
        // plain Poisson birth law: compare count moments over many replicas.
        let cat = catalog();
        let beta = 0.3;
        let g = square(0, 0);
        let lambda = (-beta * 4.0f64).exp() * 3.0;
        let reps = 20_000usize;
        let (mut s, mut ss) = (0.0, 0.0);
        for r in 0..reps {
            let mut f =
                FieldRealization::new(cat.clone(), beta, replica_seed(23, r as u64));
            let k = f.cylinders_in(g, -3.0, 0.0).len() as f64;
            s += k;
            ss += k * k;
        }
        let n = reps as f64;
        let mean = s / n;
        let var = ss / n - mean * mean;
        assert!((mean - lambda).abs() < 3.0 * (lambda / n).sqrt(), "mean {mean} vs {lambda}");
        assert!((var - lambda).abs() < 5.0 * (lambda / n).sqrt(), "var {var} vs {lambda}");
    }

    #[test]
    fn backward_lifetimes_split_correctly() {
        // Within a backward window, survivors are exactly the cylinders whose
        // life reaches 0, with the right conditional frequency.
        let cat = catalog();
        let g = square(0, 0);
        let mut alive = 0usize;
        let mut total = 0usize;
        for r in 0..30_000 {
            let mut f = FieldRealization::new(cat.clone(), 0.3, replica_seed(31, r));
            for c in f.cylinders_in(g, -1.0, 0.0) {
                total += 1;
                if c.death() >= 0.0 {
                    alive += 1;
                    assert_eq!(c.domain, domain::SURVIVOR);
                } else {
                    assert_eq!(c.domain, domain::BACKWARD_CELL);
                    assert!(c.death() < 0.0);
                }
            }
        }
        // P(survive | birth uniform in [-1,0)) = 1 - e^{-1} ≈ 0.632.
        let p = alive as f64 / total as f64;
        let sigma = (0.632 * 0.368 / total as f64).sqrt();
        assert!((p - 0.6321).abs() < 4.0 * sigma, "p {p}, n {total}");
    }

    #[test]
    fn free_state_counts_initial_and_born() {
        let cat = catalog();
        let g = square(0, 0);
        let mut f = FieldRealization::new(cat, 2.0, 9);
        let region = [g];
        let zero = f.free_state(&[], 0.0, &region);
        assert_eq!(zero[0], (g, 0));
        let init = [(g, 3u32)];
        let at0 = f.free_state(&init, 0.0, &region);
        assert_eq!(at0[0].1, 3);
        // After a long time every initial cylinder is dead (whp at beta=2).
        let later = f.free_state(&init, 60.0, &region);
        assert!(later[0].1 <= 1);
    }

    #[test]
    fn free_state_is_stationary_poisson_in_the_long_run() {
        let cat = catalog();
        let beta = 0.5;
        let g = square(0, 0);
        let lambda = (-beta * 4.0f64).exp();
        let reps = 20_000usize;
        let t = 25.0;
        let (mut s, mut ss) = (0.0, 0.0);
        for r in 0..reps {
            let mut f =
                FieldRealization::new(cat.clone(), beta, replica_seed(41, r as u64));
            let k = f.free_state(&[], t, &[g])[0].1 as f64;
            s += k;
            ss += k * k;
        }
        let n = reps as f64;
        let mean = s / n;
        let var = ss / n - mean * mean;
        assert!((mean - lambda).abs() < 3.0 * (lambda / n).sqrt(), "mean {mean} vs {lambda}");
        assert!((var - lambda).abs() < 5.0 * (lambda / n).sqrt(), "var {var} vs {lambda}");
    }

    #[test]
    fn dump_format_is_stable() {
        let cat = catalog();
        let mut f = FieldRealization::new(cat, 0.2, 12);
        let cs = f.cylinders_in(square(0, 0), 0.0, 30.0);
        let dump = dump_cylinders(&cs);
        assert_eq!(dump.lines().count(), cs.len());
        for line in dump.lines() {
            assert_eq!(line.split(',').count(), 5);
        }
    }
}
