//! Product-set machinery: word balls, triple products, closure and growth
//! exponents.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field_matrix::{sl_order, PrimeField, SquareMatrix};

pub const DEFAULT_MAX_ELEMENTS: usize = 20_000_000;

const CHUNK: usize = 512;
const PRODUCT_CHUNK: usize = 64;

/// Limits on a single expansion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Budget {
    pub max_elements: usize,
    pub max_duration: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_elements: DEFAULT_MAX_ELEMENTS, max_duration: None }
    }
}

impl Budget {
    pub fn elements(max_elements: usize) -> Self {
        Budget { max_elements, max_duration: None }
    }
}

struct Meter {
    budget: Budget,
    start: Instant,
}

impl Meter {
    fn new(budget: Budget) -> Self {
        Meter { budget, start: Instant::now() }
    }

    fn check(&self, size: usize) -> Result<()> {
        if size > self.budget.max_elements {
            return Err(Error::BudgetExceeded { partial: size });
        }
        if let Some(limit) = self.budget.max_duration {
            if self.start.elapsed() > limit {
                return Err(Error::TimeExceeded { partial: size });
            }
        }
        Ok(())
    }
}

/// A deduplicated set of elements of SL_n(F_p), kept sorted by canonical
/// encoding so iteration order is reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    n: usize,
    field: PrimeField,
    members: Vec<SquareMatrix>,
}

impl ElementSet {
    /// Build a set, rejecting members of the wrong shape or determinant.
    pub fn new<I>(n: usize, field: PrimeField, items: I) -> Result<Self>
    where
        I: IntoIterator<Item = SquareMatrix>,
    {
        let mut members = Vec::new();
        for g in items {
            if g.n() != n {
                return Err(Error::DimensionMismatch(g.n(), n));
            }
            if g.field() != field {
                return Err(Error::FieldMismatch(g.field().p(), field.p()));
            }
            let d = g.det();
            if d != 1 {
                return Err(Error::NotInGroup(d));
            }
            members.push(g);
        }
        Ok(Self::from_unsorted(n, field, members))
    }

    pub fn empty(n: usize, field: PrimeField) -> Self {
        ElementSet { n, field, members: Vec::new() }
    }

    pub fn singleton(g: SquareMatrix) -> Result<Self> {
        Self::new(g.n(), g.field(), [g])
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        ElementSet { n, field, members: vec![SquareMatrix::identity(n, field)] }
    }

    /// Members must already be validated.
    pub(crate) fn from_unsorted(n: usize, field: PrimeField, mut members: Vec<SquareMatrix>) -> Self {
        members.par_sort_unstable();
        members.dedup();
        ElementSet { n, field, members }
    }

    fn from_hash(n: usize, field: PrimeField, set: FxHashSet<SquareMatrix>) -> Self {
        Self::from_unsorted(n, field, set.into_iter().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[SquareMatrix] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, SquareMatrix> {
        self.members.iter()
    }

    pub fn contains(&self, g: &SquareMatrix) -> bool {
        self.members.binary_search(g).is_ok()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.members.iter().all(|g| other.contains(g))
    }

    pub fn filter<F>(&self, pred: F) -> ElementSet
    where
        F: Fn(&SquareMatrix) -> bool + Sync,
    {
        let members = self.members.par_iter().filter(|g| pred(g)).cloned().collect();
        ElementSet { n: self.n, field: self.field, members }
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        Self::from_unsorted(self.n, self.field, members)
    }

    pub fn inverses(&self) -> ElementSet {
        let members = self.members.iter().map(|g| g.inverse().expect("unit determinant")).collect();
        Self::from_unsorted(self.n, self.field, members)
    }

    /// A ∪ A⁻¹ ∪ {I}.
    pub fn symmetrized(&self) -> ElementSet {
        let mut members = self.members.clone();
        members.extend(self.members.iter().map(|g| g.inverse().expect("unit determinant")));
        members.push(SquareMatrix::identity(self.n, self.field));
        Self::from_unsorted(self.n, self.field, members)
    }

    pub fn keys(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        self.members.iter().map(|g| g.encode())
    }

    /// Element dump: a header `n=<n> p=<p> count=<N>` followed by one
    /// hex-encoded canonical encoding per line.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "n={} p={} count={}", self.n, self.field.p(), self.members.len())?;
        for g in &self.members {
            writeln!(w, "{}", hex::encode(g.encode()))?;
        }
        Ok(())
    }

    pub fn read_dump(text: &str) -> Result<ElementSet> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Malformed("empty dump".into()))?;
        let mut n = None;
        let mut p = None;
        let mut count = None;
        for part in header.split_whitespace() {
            let (key, value) =
                part.split_once('=').ok_or_else(|| Error::Malformed(header.to_string()))?;
            let value: usize =
                value.parse().map_err(|_| Error::Malformed(header.to_string()))?;
            match key {
                "n" => n = Some(value),
                "p" => p = Some(value),
                "count" => count = Some(value),
                _ => return Err(Error::Malformed(header.to_string())),
            }
        }
        let (Some(n), Some(p), Some(count)) = (n, p, count) else {
            return Err(Error::Malformed(header.to_string()));
        };
        let field = PrimeField::new(p as u32)?;
        let mut members = Vec::with_capacity(count);
        for line in lines.filter(|l| !l.is_empty()) {
            let bytes = hex::decode(line.trim()).map_err(|e| Error::Malformed(e.to_string()))?;
            members.push(SquareMatrix::decode(&bytes, n, field)?);
        }
        let set = ElementSet::new(n, field, members)?;
        if set.len() != count {
            return Err(Error::Malformed(format!("header count {count}, found {}", set.len())));
        }
        Ok(set)
    }
}

/// New products s·f (s ∈ gens, f ∈ frontier) that are not already in `seen`.
fn fresh_products(
    seen: &FxHashSet<SquareMatrix>,
    frontier: &[SquareMatrix],
    gens: &[SquareMatrix],
) -> Vec<FxHashSet<SquareMatrix>> {
    frontier
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut local = FxHashSet::default();
            for f in chunk {
                for s in gens {
                    let x = s.mul_unchecked(f);
                    if !seen.contains(&x) {
                        local.insert(x);
                    }
                }
            }
            local
        })
        .collect()
}

/// Incremental computation of the balls A_1 ⊆ A_2 ⊆ ... using
/// A_r = A_{r-1} ∪ S·(A_{r-1} \ A_{r-2}) with S = A ∪ A⁻¹ ∪ {I}.
pub struct BallExpander {
    n: usize,
    field: PrimeField,
    gens: Vec<SquareMatrix>,
    seen: FxHashSet<SquareMatrix>,
    frontier: Vec<SquareMatrix>,
    radius: u32,
    meter: Meter,
}

impl BallExpander {
    /// Starts at radius 1, where the ball is S itself.
    pub fn new(a: &ElementSet, budget: Budget) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Malformed("generating set is empty".into()));
        }
        let s = a.symmetrized();
        let meter = Meter::new(budget);
        meter.check(s.len())?;
        let identity = SquareMatrix::identity(a.n, a.field);
        let frontier: Vec<_> = s.iter().filter(|g| **g != identity).cloned().collect();
        let gens = s.members.clone();
        let seen: FxHashSet<_> = s.members.into_iter().collect();
        let mut ex = BallExpander { n: a.n, field: a.field, gens, seen, frontier, radius: 1, meter };
        ex.stop_if_full();
        Ok(ex)
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    /// True once A_{r+1} = A_r, i.e. the ball is the generated subgroup.
    pub fn is_saturated(&self) -> bool {
        self.frontier.is_empty()
    }

    /// Advance to the next radius and return the new ball size.
    pub fn step(&mut self) -> Result<usize> {
        self.radius += 1;
        if self.frontier.is_empty() {
            return Ok(self.seen.len());
        }
        self.meter.check(self.seen.len())?;
        let parts = fresh_products(&self.seen, &self.frontier, &self.gens);
        let mut next = Vec::new();
        for part in parts {
            for x in part {
                if self.seen.insert(x.clone()) {
                    next.push(x);
                }
            }
            self.meter.check(self.seen.len())?;
        }
        self.frontier = next;
        self.stop_if_full();
        Ok(self.seen.len())
    }

    // Once the ball is all of SL_n(F_p) it cannot grow.
    fn stop_if_full(&mut self) {
        if self.seen.len() as u128 == sl_order(self.n, self.field.p()) {
            self.frontier.clear();
        }
    }

    pub fn advance_to(&mut self, r: u32) -> Result<usize> {
        while self.radius < r {
            self.step()?;
        }
        Ok(self.seen.len())
    }

    pub fn saturate(&mut self) -> Result<usize> {
        while !self.is_saturated() {
            self.step()?;
        }
        Ok(self.seen.len())
    }

    pub fn to_set(&self) -> ElementSet {
        ElementSet::from_unsorted(self.n, self.field, self.seen.iter().cloned().collect())
    }

    pub fn into_set(self) -> ElementSet {
        ElementSet::from_hash(self.n, self.field, self.seen)
    }
}

/// A_r = {g_1⋯g_r : g_i ∈ A ∪ A⁻¹ ∪ {1}}.
pub fn word_ball(a: &ElementSet, r: u32, budget: Budget) -> Result<ElementSet> {
    if r == 0 {
        return Err(Error::Malformed("radius must be at least 1".into()));
    }
    let mut ex = BallExpander::new(a, budget)?;
    ex.advance_to(r)?;
    Ok(ex.into_set())
}

/// X·Y = {xy : x ∈ X, y ∈ Y}.
pub fn product_set(x: &ElementSet, y: &ElementSet, budget: Budget) -> Result<ElementSet> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch(x.n, y.n));
    }
    if x.field != y.field {
        return Err(Error::FieldMismatch(x.field.p(), y.field.p()));
    }
    let meter = Meter::new(budget);
    // G·Y = X·G = G for nonempty X, Y.
    let order = sl_order(x.n, x.field.p());
    if !x.is_empty() && !y.is_empty() {
        if x.len() as u128 == order {
            return Ok(x.clone());
        }
        if y.len() as u128 == order {
            return Ok(y.clone());
        }
    }
    let parts: Vec<FxHashSet<SquareMatrix>> = x
        .members
        .par_chunks(PRODUCT_CHUNK)
        .map(|chunk| {
            let mut local = FxHashSet::default();
            for a in chunk {
                for b in &y.members {
                    local.insert(a.mul_unchecked(b));
                }
            }
            local
        })
        .collect();
    let mut merged: FxHashSet<SquareMatrix> = FxHashSet::default();
    for part in parts {
        merged.extend(part);
        meter.check(merged.len())?;
    }
    Ok(ElementSet::from_hash(x.n, x.field, merged))
}

/// A·A·A, computed as (A·A)·A with deduplication after each stage.
pub fn triple_product(a: &ElementSet, budget: Budget) -> Result<ElementSet> {
    if a.is_empty() {
        return Err(Error::Malformed("set is empty".into()));
    }
    let aa = product_set(a, a, budget)?;
    product_set(&aa, a, budget)
}

/// Whether A generates SL_n(F_p), by breadth-first closure of A ∪ A⁻¹.
pub fn generates(a: &ElementSet, budget: Budget) -> Result<bool> {
    let order = sl_order(a.n, a.field.p());
    if order > budget.max_elements as u128 {
        return Err(Error::Indeterminate { group_order: order, budget: budget.max_elements });
    }
    let mut ex = BallExpander::new(a, budget)?;
    let size = ex.saturate()?;
    Ok(size as u128 == order)
}

/// {E_12(1), signed n-cycle}.
pub fn standard_generators(n: usize, field: PrimeField) -> ElementSet {
    ElementSet::from_unsorted(
        n,
        field,
        vec![SquareMatrix::transvection(n, field, 0, 1, 1), SquareMatrix::signed_cycle(n, field)],
    )
}

/// All of SL_n(F_p), as the closure of the standard generators.
pub fn enumerate_group(n: usize, field: PrimeField, budget: Budget) -> Result<ElementSet> {
    let order = sl_order(n, field.p());
    if order > budget.max_elements as u128 {
        return Err(Error::Indeterminate { group_order: order, budget: budget.max_elements });
    }
    let mut ex = BallExpander::new(&standard_generators(n, field), budget)?;
    ex.saturate()?;
    let set = ex.into_set();
    debug_assert_eq!(set.len() as u128, order);
    Ok(set)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationStatus {
    Verified,
    Unchecked,
    Failed,
}

impl GenerationStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GenerationStatus::Verified => "verified",
            GenerationStatus::Unchecked => "unchecked",
            GenerationStatus::Failed => "failed",
        }
    }
}

/// Sizes and measured exponents for one set A.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub n: usize,
    pub p: u32,
    pub size_a: usize,
    pub size_aaa: usize,
    /// log|A·A·A| / log|A| - 1, or 0 when |A| = 1.
    pub epsilon_hat: f64,
    pub saturated: bool,
    pub degenerate: bool,
    pub group_order: u128,
    pub ball_sizes: BTreeMap<u32, usize>,
    /// log|A_k| / log|A| - 1 per requested k.
    pub ball_exponents: BTreeMap<u32, f64>,
    pub generation: GenerationStatus,
}

fn exponent(size: usize, base: usize) -> f64 {
    if base <= 1 {
        0.0
    } else {
        (size as f64).ln() / (base as f64).ln() - 1.0
    }
}

/// Measure |A|, |A·A·A| and |A_k| for each requested k.
pub fn growth_scan(a: &ElementSet, ks: &[u32], budget: Budget) -> Result<GrowthReport> {
    let aaa = triple_product(a, budget)?;
    let mut ks: Vec<u32> = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.first() == Some(&0) {
        return Err(Error::Malformed("ball radius must be at least 1".into()));
    }
    let mut ball_sizes = BTreeMap::new();
    if !ks.is_empty() {
        let mut ex = BallExpander::new(a, budget)?;
        for &k in &ks {
            ball_sizes.insert(k, ex.advance_to(k)?);
        }
    }
    let size_a = a.len();
    let group_order = sl_order(a.n, a.field.p());
    Ok(GrowthReport {
        n: a.n,
        p: a.field.p(),
        size_a,
        size_aaa: aaa.len(),
        epsilon_hat: exponent(aaa.len(), size_a),
        saturated: aaa.len() as u128 == group_order,
        degenerate: size_a <= 1,
        group_order,
        ball_exponents: ball_sizes.iter().map(|(&k, &s)| (k, exponent(s, size_a))).collect(),
        ball_sizes,
        generation: GenerationStatus::Unchecked,
    })
}

impl GrowthReport {
    /// Stable column order: n, p, |A|, |AAA|, epsilon_hat, saturated, the
    /// |A_k| columns, then the per-k exponents and bookkeeping columns.
    pub fn csv_header(ks: &[u32]) -> String {
        let mut cols: Vec<String> =
            ["n", "p", "|A|", "|AAA|", "epsilon_hat", "saturated"].map(String::from).to_vec();
        cols.extend(ks.iter().map(|k| format!("|A_{k}|")));
        cols.extend(ks.iter().map(|k| format!("eps_A_{k}")));
        cols.extend(["group_order", "degenerate", "generation"].map(String::from));
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            self.n.to_string(),
            self.p.to_string(),
            self.size_a.to_string(),
            self.size_aaa.to_string(),
            format!("{:.6}", self.epsilon_hat),
            self.saturated.to_string(),
        ];
        cols.extend(self.ball_sizes.values().map(|s| s.to_string()));
        cols.extend(self.ball_exponents.values().map(|e| format!("{e:.6}")));
        cols.push(self.group_order.to_string());
        cols.push(self.degenerate.to_string());
        cols.push(self.generation.as_str().to_string());
        cols.join(",")
    }

    /// Flat JSON object with the same fields as the CSV row.
    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        obj.insert("n".into(), self.n.into());
        obj.insert("p".into(), self.p.into());
        obj.insert("|A|".into(), self.size_a.into());
        obj.insert("|AAA|".into(), self.size_aaa.into());
        obj.insert("epsilon_hat".into(), self.epsilon_hat.into());
        obj.insert("saturated".into(), self.saturated.into());
        for (k, s) in &self.ball_sizes {
            obj.insert(format!("|A_{k}|"), (*s).into());
        }
        for (k, e) in &self.ball_exponents {
            obj.insert(format!("eps_A_{k}"), (*e).into());
        }
        obj.insert("group_order".into(), (self.group_order as u64).into());
        obj.insert("degenerate".into(), self.degenerate.into());
        obj.insert("generation".into(), self.generation.as_str().into());
        serde_json::Value::Object(obj)
    }
}
