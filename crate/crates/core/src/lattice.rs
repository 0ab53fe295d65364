//! Plaquette and contour geometry on the two-dimensional lattice.
//!
//! A plaquette is a unit segment of the lattice, indexed by the lattice point
//! `center` and an `axis`: it spans `center .. center + e_axis`. Its two
//! endpoints are the (d−2)-faces of the model; two plaquettes are adjacent
//! when they share an endpoint. A contour is a finite, connected set of
//! plaquettes in which every endpoint is covered an even number of times.
//! Two contours are incompatible when they share an endpoint.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Point {
    pub x: i32,
    pub y: i32,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0, y: 0 };

    pub fn new(x: i32, y: i32) -> Point {
        Point { x, y }
    }

    pub fn add(self, other: Point) -> Point {
        Point::new(self.x + other.x, self.y + other.y)
    }

    pub fn sub(self, other: Point) -> Point {
        Point::new(self.x - other.x, self.y - other.y)
    }

    pub fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }

    /// Manhattan norm, the distance used for all spatial bounds.
    pub fn manhattan(self, other: Point) -> i32 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn unit(self) -> Point {
        match self {
            Axis::X => Point::new(1, 0),
            Axis::Y => Point::new(0, 1),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
        }
    }
}

/// A unit segment of the lattice: `center .. center + e_axis`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Plaquette {
    pub center: Point,
    pub axis: Axis,
}

impl Plaquette {
    pub fn new(x: i32, y: i32, axis: Axis) -> Plaquette {
        Plaquette { center: Point::new(x, y), axis }
    }

    /// The two (d−2)-faces bounding this plaquette.
    pub fn endpoints(self) -> [Point; 2] {
        [self.center, self.center.add(self.axis.unit())]
    }

    pub fn translate(self, v: Point) -> Plaquette {
        Plaquette { center: self.center.add(v), axis: self.axis }
    }

    /// Shares an endpoint with `other`.
    pub fn touches(self, other: Plaquette) -> bool {
        let [a, b] = self.endpoints();
        let [c, d] = other.endpoints();
        a == c || a == d || b == c || b == d
    }
}

impl fmt::Display for Plaquette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.center.x, self.center.y, self.axis.letter())
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ContourError {
    #[error("contour must contain at least one plaquette")]
    Empty,
    #[error("some endpoint is covered an odd number of times")]
    NotClosed,
    #[error("plaquette set is not connected")]
    NotConnected,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("max_length must be an even integer >= 4, got {0}")]
    BadLength(usize),
    #[error("enumeration node budget of {0} exhausted")]
    BudgetExceeded(u64),
}

/// A connected, closed set of plaquettes, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Contour {
    plaquettes: Vec<Plaquette>,
}

impl Contour {
    /// Validate a plaquette set: closed (even incidence at every endpoint)
    /// and connected through shared endpoints.
    pub fn new(plaquettes: impl IntoIterator<Item = Plaquette>) -> Result<Contour, ContourError> {
        let mut list: Vec<Plaquette> = plaquettes.into_iter().collect();
        list.sort_unstable();
        list.dedup();
        if list.is_empty() {
            return Err(ContourError::Empty);
        }
        let mut degree: HashMap<Point, u32> = HashMap::new();
        for p in &list {
            for v in p.endpoints() {
                *degree.entry(v).or_insert(0) += 1;
            }
        }
        if degree.values().any(|&d| d % 2 != 0) {
            return Err(ContourError::NotClosed);
        }
        if !is_connected(&list) {
            return Err(ContourError::NotConnected);
        }
        Ok(Contour { plaquettes: list })
    }

    /// Internal constructor for sets already known to be valid and sorted.
    fn from_sorted_unchecked(plaquettes: Vec<Plaquette>) -> Contour {
        debug_assert!(plaquettes.windows(2).all(|w| w[0] < w[1]));
        Contour { plaquettes }
    }

    /// Number of plaquettes, |γ|.
    pub fn len(&self) -> usize {
        self.plaquettes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plaquettes.is_empty()
    }

    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn contains(&self, p: Plaquette) -> bool {
        self.plaquettes.binary_search(&p).is_ok()
    }

    /// Distinct endpoints covered by the contour, sorted.
    pub fn faces(&self) -> Vec<Point> {
        let mut vs: Vec<Point> =
            self.plaquettes.iter().flat_map(|p| p.endpoints()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Distinct plaquette centers (the site projection of the contour).
    pub fn sites(&self) -> Vec<Point> {
        let mut vs: Vec<Point> = self.plaquettes.iter().map(|p| p.center).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn translate(&self, v: Point) -> Contour {
        Contour::from_sorted_unchecked(
            self.plaquettes.iter().map(|p| p.translate(v)).collect(),
        )
    }

    /// Canonical representative of the translation class, plus the shift
    /// mapping the representative back onto `self`. The representative is the
    /// translate whose first sorted plaquette is centered at the origin, so
    /// canonicalizing any translate returns the same contour. Idempotent.
    pub fn canonical_form(&self) -> (Contour, Point) {
        let shift = self.plaquettes[0].center;
        (self.translate(shift.neg()), shift)
    }
}

fn is_connected(list: &[Plaquette]) -> bool {
    if list.is_empty() {
        return false;
    }
    let mut by_vertex: HashMap<Point, Vec<usize>> = HashMap::new();
    for (i, p) in list.iter().enumerate() {
        for v in p.endpoints() {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut seen = vec![false; list.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(i) = stack.pop() {
        for v in list[i].endpoints() {
            for &j in &by_vertex[&v] {
                if !seen[j] {
                    seen[j] = true;
                    reached += 1;
                    stack.push(j);
                }
            }
        }
    }
    reached == list.len()
}

/// Volume-exclusion test: true iff the contours share some endpoint.
/// Symmetric, and reflexive (every contour shares its own faces).
pub fn incompatible(a: &Contour, b: &Contour) -> bool {
    // Contours are tiny; a sorted merge over faces is fast enough everywhere
    // this is called with raw contours. Hot paths use catalog indexes instead.
    let fa = a.faces();
    let fb = b.faces();
    let (mut i, mut j) = (0, 0);
    while i < fa.len() && j < fb.len() {
        match fa[i].cmp(&fb[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// All contours of length <= `max_length` containing `anchor`, in canonical
/// order. Depth-first search over connected edge sets guided by the parity
/// frontier: while some endpoint has odd incidence the search may only add
/// plaquettes at the smallest odd endpoint, which gives every closed set a
/// unique discovery path.
pub fn enumerate_through(
    anchor: Plaquette,
    max_length: usize,
    node_budget: u64,
) -> Result<Vec<Contour>, EnumError> {
    if max_length < 4 || max_length % 2 != 0 {
        return Err(EnumError::BadLength(max_length));
    }
    let mut search = Search {
        max_length,
        node_budget,
        nodes: 0,
        chosen: Vec::with_capacity(max_length),
        excluded: HashSet::new(),
        parity: HashMap::new(),
        odd: BTreeSet::new(),
        out: Vec::new(),
    };
    search.toggle(anchor);
    search.chosen.push(anchor);
    search.dfs()?;
    let mut out = search.out;
    out.sort_unstable_by(|a, b| a.plaquettes.cmp(&b.plaquettes));
    Ok(out)
}

struct Search {
    max_length: usize,
    node_budget: u64,
    nodes: u64,
    chosen: Vec<Plaquette>,
    excluded: HashSet<Plaquette>,
    parity: HashMap<Point, u32>,
    odd: BTreeSet<Point>,
    out: Vec<Contour>,
}

/// The four plaquettes incident to a vertex, in canonical order.
fn incident(v: Point) -> [Plaquette; 4] {
    let mut ps = [
        Plaquette { center: v.sub(Point::new(1, 0)), axis: Axis::X },
        Plaquette { center: v.sub(Point::new(0, 1)), axis: Axis::Y },
        Plaquette { center: v, axis: Axis::X },
        Plaquette { center: v, axis: Axis::Y },
    ];
    ps.sort_unstable();
    ps
}

impl Search {
    fn toggle(&mut self, p: Plaquette) {
        for v in p.endpoints() {
            let d = self.parity.entry(v).or_insert(0);
            *d += 1;
            if *d % 2 == 1 {
                self.odd.insert(v);
            } else {
                self.odd.remove(&v);
            }
        }
    }

    fn untoggle(&mut self, p: Plaquette) {
        for v in p.endpoints() {
            let d = self.parity.get_mut(&v).unwrap();
            *d -= 1;
            if *d % 2 == 1 {
                self.odd.insert(v);
            } else {
                self.odd.remove(&v);
            }
            if *d == 0 {
                self.parity.remove(&v);
                self.odd.remove(&v);
            }
        }
    }

    fn dfs(&mut self) -> Result<(), EnumError> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(EnumError::BudgetExceeded(self.node_budget));
        }
        let remaining = self.max_length - self.chosen.len();
        if self.odd.is_empty() {
            self.out.push(Contour::from_sorted_unchecked({
                let mut s = self.chosen.clone();
                s.sort_unstable();
                s
            }));
            // Any strictly larger closed superset differs by a closed set,
            // hence by at least one lattice cycle of length >= 4.
            if remaining < 4 {
                return Ok(());
            }
            let candidates = self.even_candidates();
            self.branch(candidates)
        } else {
            if self.odd.len() > 2 * remaining {
                return Ok(());
            }
            let v = *self.odd.iter().next().unwrap();
            if let Some(d) = self.odd.iter().filter(|&&w| w != v).map(|w| v.manhattan(*w)).min() {
                // Closing v and its mate needs a path of at least d plaquettes.
                if d as usize > remaining {
                    return Ok(());
                }
            }
            let candidates: Vec<Plaquette> = incident(v)
                .into_iter()
                .filter(|p| !self.excluded.contains(p) && !self.chosen.contains(p))
                .collect();
            self.branch(candidates)
        }
    }

    /// Undecided plaquettes adjacent to the current set, canonical order.
    fn even_candidates(&self) -> Vec<Plaquette> {
        let mut cands = BTreeSet::new();
        for &v in self.parity.keys() {
            for p in incident(v) {
                if !self.excluded.contains(&p) && !self.chosen.contains(&p) {
                    cands.insert(p);
                }
            }
        }
        cands.into_iter().collect()
    }

    /// Include each candidate in turn, with all earlier ones excluded.
    fn branch(&mut self, candidates: Vec<Plaquette>) -> Result<(), EnumError> {
        for (i, &p) in candidates.iter().enumerate() {
            self.chosen.push(p);
            self.toggle(p);
            for &q in &candidates[..i] {
                self.excluded.insert(q);
            }
            let r = self.dfs();
            for &q in &candidates[..i] {
                self.excluded.remove(&q);
            }
            self.untoggle(p);
            self.chosen.pop();
            r?;
        }
        Ok(())
    }
}

/// Identifier of a translation-equivalence class within a catalog.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ClassId(pub u32);

/// A contour instance: a catalog class translated by `shift`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Instance {
    pub class: ClassId,
    pub shift: Point,
}

impl Instance {
    pub fn translate(self, v: Point) -> Instance {
        Instance { class: self.class, shift: self.shift.add(v) }
    }
}

/// One translation-equivalence class of contours.
#[derive(Clone, Debug)]
pub struct ContourClass {
    pub id: ClassId,
    pub representative: Contour,
    pub length: usize,
    /// Number of translates of this class containing the anchor plaquette.
    pub through_anchor: usize,
    faces: Vec<Point>,
    sites: Vec<Point>,
}

impl ContourClass {
    pub fn faces(&self) -> &[Point] {
        &self.faces
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }
}

/// Model for bounding the number of contours of length `n` through a fixed
/// plaquette beyond the enumerated cap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum TailModel {
    /// κ(n) <= n·4^n, from tracing an Eulerian circuit of the contour.
    Walk,
    /// κ(n) <= amp·growth^n, extrapolated from the exact counts.
    Geometric { amp: f64, growth: f64 },
}

impl TailModel {
    /// log κ(n) under the model.
    pub fn log_count(&self, n: usize) -> f64 {
        match *self {
            TailModel::Walk => (n as f64).ln() + n as f64 * 4.0f64.ln(),
            TailModel::Geometric { amp, growth } => amp.ln() + n as f64 * growth.ln(),
        }
    }

    /// Smallest β at which κ(n)·e^{−βn} is summable (and nonincreasing).
    pub fn convergence_threshold(&self) -> f64 {
        match *self {
            TailModel::Walk => 4.0f64.ln(),
            TailModel::Geometric { growth, .. } => growth.ln(),
        }
    }
}

/// The anchor plaquette used for "contours through the origin": the unit
/// segment from (0,0) to (1,0). A config switch widens this to any plaquette
/// touching the origin site.
pub const ANCHOR: Plaquette = Plaquette { center: Point { x: 0, y: 0 }, axis: Axis::X };

/// Convention for "contour through the origin" sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OriginRule {
    /// The fixed anchor plaquette belongs to the contour (default).
    AnchorPlaquette,
    /// Some plaquette centered at the origin site belongs to the contour.
    AnySitePlaquette,
}

/// Exhaustive catalog of contour classes up to a length cap, with the
/// incidence indexes used by the samplers. Immutable after construction.
pub struct Catalog {
    max_length: usize,
    classes: Vec<ContourClass>,
    /// Instances containing the plaquette ((0,0),axis); index 0 = X, 1 = Y.
    through_plaquette: [Vec<Instance>; 2],
    /// Instances covering the vertex (0,0).
    through_face: Vec<Instance>,
    /// Instances containing some plaquette centered at the origin site.
    through_origin_site: Vec<Instance>,
    /// Map canonical representative -> class id.
    lookup: HashMap<Vec<Plaquette>, ClassId>,
    /// Per class: all instances incompatible with the representative.
    incompat: Vec<OnceLock<Vec<Instance>>>,
    tail_model: TailModel,
}

impl Catalog {
    pub const DEFAULT_MAX_LENGTH: usize = 12;
    pub const DEFAULT_BUDGET: u64 = 500_000_000;

    pub fn build(max_length: usize) -> Result<Catalog, EnumError> {
        Catalog::build_with(max_length, Catalog::DEFAULT_BUDGET, TailModel::Walk)
    }

    pub fn build_with(
        max_length: usize,
        node_budget: u64,
        tail_model: TailModel,
    ) -> Result<Catalog, EnumError> {
        let through = enumerate_through(ANCHOR, max_length, node_budget)?;
        let mut reps: BTreeSet<Vec<Plaquette>> = BTreeSet::new();
        for c in &through {
            let (rep, _) = c.canonical_form();
            reps.insert(rep.plaquettes);
        }
        let contours = reps
            .into_iter()
            .map(Contour::from_sorted_unchecked)
            .collect();
        Ok(Catalog::from_classes(max_length, contours, tail_model))
    }

    /// Assemble a catalog from one representative per class. Exhaustiveness
    /// up to `max_length` is the caller's responsibility; [`Catalog::build`]
    /// guarantees it by enumeration.
    fn from_classes(max_length: usize, contours: Vec<Contour>, tail_model: TailModel) -> Catalog {
        let mut ordered: Vec<Contour> = contours;
        ordered.sort_by(|a, b| (a.len(), a.plaquettes()).cmp(&(b.len(), b.plaquettes())));
        let mut classes: Vec<ContourClass> = Vec::with_capacity(ordered.len());
        let mut lookup = HashMap::with_capacity(ordered.len());
        for (i, rep) in ordered.into_iter().enumerate() {
            let id = ClassId(i as u32);
            let faces = rep.faces();
            let sites = rep.sites();
            // Exactly one translate per anchor-axis plaquette maps onto the
            // anchor, so the multiplicity is the count of such plaquettes.
            let through_anchor = rep
                .plaquettes()
                .iter()
                .filter(|p| p.axis == ANCHOR.axis)
                .count();
            lookup.insert(rep.plaquettes().to_vec(), id);
            classes.push(ContourClass {
                id,
                length: rep.len(),
                representative: rep,
                through_anchor,
                faces,
                sites,
            });
        }

        let mut through_plaquette = [Vec::new(), Vec::new()];
        let mut through_face = Vec::new();
        let mut through_origin_site = Vec::new();
        for class in &classes {
            for p in class.representative.plaquettes() {
                let inst = Instance { class: class.id, shift: p.center.neg() };
                through_plaquette[p.axis as usize].push(inst);
                through_origin_site.push(inst);
            }
            for &v in class.faces() {
                through_face.push(Instance { class: class.id, shift: v.neg() });
            }
        }
        for list in through_plaquette.iter_mut() {
            list.sort_unstable();
        }
        through_face.sort_unstable();
        through_origin_site.sort_unstable();

        let incompat = (0..classes.len()).map(|_| OnceLock::new()).collect();
        Catalog {
            max_length,
            classes,
            through_plaquette,
            through_face,
            through_origin_site,
            lookup,
            incompat,
            tail_model,
        }
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn tail_model(&self) -> TailModel {
        self.tail_model
    }

    pub fn with_tail_model(mut self, model: TailModel) -> Catalog {
        self.tail_model = model;
        self
    }

    pub fn classes(&self) -> &[ContourClass] {
        &self.classes
    }

    pub fn class(&self, id: ClassId) -> &ContourClass {
        &self.classes[id.0 as usize]
    }

    pub fn length_of(&self, inst: Instance) -> usize {
        self.class(inst.class).length
    }

    pub fn contour_of(&self, inst: Instance) -> Contour {
        self.class(inst.class).representative.translate(inst.shift)
    }

    /// Classes and through-anchor instance counts per length.
    pub fn counts_by_length(&self) -> Vec<(usize, usize, usize)> {
        let mut map: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for c in &self.classes {
            let e = map.entry(c.length).or_insert((0, 0));
            e.0 += 1;
            e.1 += c.through_anchor;
        }
        map.into_iter().map(|(len, (cl, inst))| (len, cl, inst)).collect()
    }

    /// Canonicalize an arbitrary valid contour against the catalog.
    pub fn class_of(&self, contour: &Contour) -> Option<(ClassId, Point)> {
        let (rep, shift) = contour.canonical_form();
        self.lookup.get(rep.plaquettes()).map(|&id| (id, shift))
    }

    /// Instances whose contour contains the given plaquette.
    pub fn instances_through_plaquette(&self, p: Plaquette) -> impl Iterator<Item = Instance> + '_ {
        self.through_plaquette[p.axis as usize]
            .iter()
            .map(move |inst| inst.translate(p.center))
    }

    /// Instances whose contour covers the given vertex.
    pub fn instances_through_face(&self, v: Point) -> impl Iterator<Item = Instance> + '_ {
        self.through_face.iter().map(move |inst| inst.translate(v))
    }

    /// Instances through the origin under the configured convention.
    pub fn instances_through_origin(&self, rule: OriginRule) -> &[Instance] {
        match rule {
            OriginRule::AnchorPlaquette => &self.through_plaquette[Axis::X as usize],
            OriginRule::AnySitePlaquette => &self.through_origin_site,
        }
    }

    /// All instances incompatible with `inst` (sharing some face), including
    /// every translate of every class that touches it. Deduplicated, sorted.
    pub fn incompatible_instances(&self, inst: Instance) -> Vec<Instance> {
        self.incompat_of_class(inst.class)
            .iter()
            .map(|i| i.translate(inst.shift))
            .collect()
    }

    fn incompat_of_class(&self, class: ClassId) -> &[Instance] {
        self.incompat[class.0 as usize].get_or_init(|| {
            let mut set = BTreeSet::new();
            for &v in self.classes[class.0 as usize].faces() {
                for inst in self.instances_through_face(v) {
                    set.insert(inst);
                }
            }
            set.into_iter().collect()
        })
    }

    /// Exact number of catalog contours of length `n` through the anchor.
    pub fn exact_count_through_anchor(&self, n: usize) -> usize {
        self.classes
            .iter()
            .filter(|c| c.length == n)
            .map(|c| c.through_anchor)
            .sum()
    }

    /// Upper bound on κ(n), the number of contours of length `n` through a
    /// fixed plaquette, for lengths beyond the catalog cap.
    pub fn count_tail_bound(&self, n: usize) -> f64 {
        debug_assert!(n > self.max_length);
        self.tail_model.log_count(n).exp()
    }

    /// Geometric tail model fitted to the exact through-anchor counts by
    /// least squares on log counts.
    pub fn fit_geometric_tail(&self) -> TailModel {
        let pts: Vec<(f64, f64)> = self
            .counts_by_length()
            .into_iter()
            .map(|(len, _, inst)| (len as f64, (inst as f64).ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        let intercept = (sy - slope * sx) / n;
        // Inflate the amplitude so the model dominates every exact count.
        let growth = slope.exp();
        let mut amp = intercept.exp();
        for (len, _, inst) in self.counts_by_length() {
            let need = inst as f64 / growth.powi(len as i32);
            if need > amp {
                amp = need;
            }
        }
        TailModel::Geometric { amp, growth }
    }

    /// Export the catalog as structured text: one contour per record.
    pub fn export(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("catalog max_length {}\n", self.max_length));
        for c in &self.classes {
            out.push_str(&format!("{}", c.length));
            for p in c.representative.plaquettes() {
                out.push_str(&format!(" {p}"));
            }
            out.push('\n');
        }
        out
    }

    /// Parse a catalog exported by [`Catalog::export`]. Every record is
    /// validated (closed, connected, canonical, within the length cap) and
    /// the indexes are rebuilt; exhaustiveness is not re-checked here, the
    /// regression tests compare an import against a fresh build.
    pub fn import(text: &str) -> Result<Catalog, String> {
        let mut lines = text.lines();
        let header = lines.next().ok_or("empty catalog file")?;
        let max_length: usize = header
            .strip_prefix("catalog max_length ")
            .ok_or("bad catalog header")?
            .trim()
            .parse()
            .map_err(|e| format!("bad max_length: {e}"))?;
        let mut seen = BTreeSet::new();
        let mut contours = Vec::new();
        for (i, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let len: usize = parts
                .next()
                .unwrap()
                .parse()
                .map_err(|e| format!("record {i}: bad length: {e}"))?;
            let mut ps = Vec::with_capacity(len);
            for tok in parts {
                let mut f = tok.split(',');
                let x: i32 = f
                    .next()
                    .ok_or_else(|| format!("record {i}: bad plaquette"))?
                    .parse()
                    .map_err(|e| format!("record {i}: {e}"))?;
                let y: i32 = f
                    .next()
                    .ok_or_else(|| format!("record {i}: bad plaquette"))?
                    .parse()
                    .map_err(|e| format!("record {i}: {e}"))?;
                let axis = match f.next() {
                    Some("X") => Axis::X,
                    Some("Y") => Axis::Y,
                    _ => return Err(format!("record {i}: bad axis")),
                };
                ps.push(Plaquette::new(x, y, axis));
            }
            let c = Contour::new(ps).map_err(|e| format!("record {i}: {e}"))?;
            if c.len() != len {
                return Err(format!("record {i}: length mismatch"));
            }
            if c.len() > max_length {
                return Err(format!("record {i}: exceeds max_length"));
            }
            let (rep, shift) = c.canonical_form();
            if shift != Point::ORIGIN {
                return Err(format!("record {i}: not in canonical position"));
            }
            if !seen.insert(rep.plaquettes().to_vec()) {
                return Err(format!("record {i}: duplicate class"));
            }
            contours.push(rep);
        }
        if contours.is_empty() {
            return Err("catalog has no records".into());
        }
        Ok(Catalog::from_classes(max_length, contours, TailModel::Walk))
    }
}

impl fmt::Debug for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Catalog")
            .field("max_length", &self.max_length)
            .field("classes", &self.classes.len())
            .finish()
    }
}
