//! Additive energy and the (X, Y, X_y) data built from trace statistics.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_matrix::{Fp, PrimeField};
use crate::growth::{word_ball, Budget, ElementSet};
use crate::trace_lab::{dyadic_bins, f_of, popular_tuple, powers};

/// A finite subset of F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSet {
    field: PrimeField,
    elements: BTreeSet<u32>,
}

impl ScalarSet {
    pub fn new<I: IntoIterator<Item = u32>>(field: PrimeField, items: I) -> Result<Self> {
        let elements: BTreeSet<u32> = items.into_iter().collect();
        if let Some(&bad) = elements.iter().find(|&&x| x >= field.p()) {
            return Err(Error::Malformed(format!("{bad} is not reduced mod {}", field.p())));
        }
        Ok(ScalarSet { field, elements })
    }

    pub fn from_elems(field: PrimeField, items: &[Fp]) -> Result<Self> {
        if let Some(x) = items.iter().find(|x| x.field() != field) {
            return Err(Error::FieldMismatch(x.field().p(), field.p()));
        }
        Self::new(field, items.iter().map(|x| x.value()))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.contains(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }
}

/// A finite subset of F_p^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSet {
    field: PrimeField,
    dim: usize,
    elements: BTreeSet<Vec<u32>>,
}

impl VectorSet {
    pub fn new<I: IntoIterator<Item = Vec<u32>>>(field: PrimeField, dim: usize, items: I) -> Result<Self> {
        let mut elements = BTreeSet::new();
        for v in items {
            check_vector(field, dim, &v)?;
            elements.insert(v);
        }
        Ok(VectorSet { field, dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<u32>> {
        self.elements.iter()
    }

    /// The values taken by coordinate k.
    pub fn projection(&self, k: usize) -> ScalarSet {
        ScalarSet { field: self.field, elements: self.elements.iter().map(|v| v[k]).collect() }
    }
}

fn check_vector(field: PrimeField, dim: usize, v: &[u32]) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch(v.len(), dim));
    }
    if let Some(&bad) = v.iter().find(|&&x| x >= field.p()) {
        return Err(Error::Malformed(format!("{bad} is not reduced mod {}", field.p())));
    }
    Ok(())
}

fn dot(field: PrimeField, y: &[u32], x: &[u32]) -> u32 {
    y.iter().zip(x).fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
}

/// Sets X_y ⊆ Xⁿ, one per y, each satisfying y·X_y ⊆ X.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberFamily {
    x: ScalarSet,
    dim: usize,
    assignments: BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>>,
}

impl FiberFamily {
    /// Validates coordinates and the containment y·x ∈ X for every pair.
    pub fn new(
        x: ScalarSet,
        dim: usize,
        assignments: BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>>,
    ) -> Result<Self> {
        let field = x.field;
        for (y, fiber) in &assignments {
            check_vector(field, dim, y)?;
            for v in fiber {
                check_vector(field, dim, v)?;
                if let Some(&c) = v.iter().find(|&&c| !x.contains(c)) {
                    return Err(Error::Malformed(format!("fiber coordinate {c} not in X")));
                }
                let value = dot(field, y, v);
                if !x.contains(value) {
                    return Err(Error::CertificateFailed { value });
                }
            }
        }
        Ok(FiberFamily { x, dim, assignments })
    }

    /// Re-runs the construction checks.
    pub fn revalidate(&self) -> Result<()> {
        FiberFamily::new(self.x.clone(), self.dim, self.assignments.clone()).map(|_| ())
    }

    pub fn x(&self) -> &ScalarSet {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn fiber(&self, y: &[u32]) -> Option<&BTreeSet<Vec<u32>>> {
        self.assignments.get(y)
    }

    pub fn fiber_size(&self, y: &[u32]) -> usize {
        self.fiber(y).map_or(0, |f| f.len())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &BTreeSet<Vec<u32>>)> {
        self.assignments.iter()
    }
}

/// E_+(X, Y) = Σ_d r(d)² with r(d) = #{(a, b) ∈ X × Y : a - b = d}.
pub fn additive_energy(x: &ScalarSet, y: &ScalarSet) -> u64 {
    let field = x.field;
    let mut r = vec![0u64; field.p() as usize];
    for a in x.iter() {
        for b in y.iter() {
            r[field.sub(a, b) as usize] += 1;
        }
    }
    r.iter().map(|&c| c * c).sum()
}

/// y·X.
pub fn dilate(x: &ScalarSet, y: Fp) -> ScalarSet {
    let field = x.field;
    ScalarSet { field, elements: x.iter().map(|a| field.mul(a, y.value())).collect() }
}

/// X, Y = f(D) and the fibers X_y.
#[derive(Clone, Debug)]
pub struct VitalInstance {
    pub x: ScalarSet,
    pub y: VectorSet,
    pub fibers: FiberFamily,
}

/// Builds X from the traces tr(tⁱa), 0 ≤ i ≤ n, over the most popular
/// dyadic bin of each t ∈ D in the pool A_{pool_radius}; Y = f(D); and
/// X_{f(t)} from the tuples (tr(g), ..., tr(t^{n-1}g)) over that bin.
pub fn assemble_vital_instance(
    a: &ElementSet,
    d: &ElementSet,
    pool_radius: u32,
    budget: Budget,
) -> Result<VitalInstance> {
    if d.is_empty() {
        return Err(Error::Malformed("D is empty".into()));
    }
    let field = a.field();
    let n = a.n();
    let pool = word_ball(a, pool_radius, budget)?;
    let mut traces = BTreeSet::new();
    let mut ys = Vec::with_capacity(d.len());
    let mut fibers: BTreeMap<Vec<u32>, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for t in d.iter() {
        if t.char_poly_full().roots().len() != n {
            return Err(Error::UnsupportedTorus);
        }
        let y = f_of(t)?.r;
        let bins = dyadic_bins(t, &pool)?;
        let bin = popular_tuple(&bins)?;
        let pw = powers(t);
        let fiber = fibers.entry(y.clone()).or_default();
        for g in bin.members.iter() {
            let tr: Vec<u32> = pw.iter().map(|tk| tk.mul_unchecked(g).trace()).collect();
            traces.extend(tr.iter().copied());
            fiber.insert(tr[..n].to_vec());
        }
        ys.push(y);
    }
    let x = ScalarSet::new(field, traces)?;
    let y = VectorSet::new(field, n, ys)?;
    let fibers = FiberFamily::new(x.clone(), n, fibers)?;
    Ok(VitalInstance { x, y, fibers })
}

/// One row per y plus summary quantities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VitalReport {
    pub fibers: Vec<FiberRow>,
    pub summary: VitalSummary,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberRow {
    pub y: Vec<u32>,
    pub size: usize,
    /// log|X_y| / log|X|, absent when either side is degenerate.
    pub exponent: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VitalSummary {
    pub x_size: usize,
    /// p^{1-δ}.
    pub x_bound: f64,
    pub y_size: usize,
    pub min_fiber: usize,
    pub max_fiber: usize,
    pub min_exponent: Option<f64>,
    pub max_exponent: Option<f64>,
    /// Coordinate of Y with the most distinct values (smallest on ties).
    pub proj_coord: usize,
    /// Number of distinct values of that coordinate: the largest subset of
    /// Y on which it is injective.
    pub y_prime: usize,
    /// Vectors whose fiber has at least half the maximal fiber size.
    pub y_high: usize,
    /// Σ over y₁ in the projection of E_+(X, y₁X).
    pub energy_sum: u64,
    pub degenerate: bool,
}

fn log_ratio(size: usize, base: usize) -> Option<f64> {
    if base <= 1 || size == 0 {
        None
    } else {
        Some((size as f64).ln() / (base as f64).ln())
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "nan".to_string(), |e| format!("{e:.6}"))
}

pub fn vital_diagnostics(x: &ScalarSet, y: &VectorSet, fibers: &FiberFamily, delta: f64) -> VitalReport {
    let rows: Vec<FiberRow> = y
        .iter()
        .map(|v| {
            let size = fibers.fiber_size(v);
            FiberRow { y: v.clone(), size, exponent: log_ratio(size, x.len()) }
        })
        .collect();
    let sizes = rows.iter().map(|r| r.size);
    let min_fiber = sizes.clone().min().unwrap_or(0);
    let max_fiber = sizes.max().unwrap_or(0);
    let exps: Vec<f64> = rows.iter().filter_map(|r| r.exponent).collect();
    let min_exponent = exps.iter().copied().reduce(f64::min);
    let max_exponent = exps.iter().copied().reduce(f64::max);
    let (proj_coord, projection) = (0..y.dim())
        .map(|k| (k, y.projection(k)))
        .fold(None::<(usize, ScalarSet)>, |best, (k, s)| match best {
            Some((bk, bs)) if bs.len() >= s.len() => Some((bk, bs)),
            _ => Some((k, s)),
        })
        .unwrap_or((0, ScalarSet { field: x.field, elements: BTreeSet::new() }));
    let values: Vec<u32> = projection.iter().collect();
    let energy_sum: u64 = values
        .par_iter()
        .map(|&y1| additive_energy(x, &dilate(x, x.field.elem(y1))))
        .collect::<Vec<u64>>()
        .into_iter()
        .sum();
    let y_high = rows.iter().filter(|r| max_fiber > 0 && 2 * r.size >= max_fiber).count();
    let summary = VitalSummary {
        x_size: x.len(),
        x_bound: (x.field.p() as f64).powf(1.0 - delta),
        y_size: y.len(),
        min_fiber,
        max_fiber,
        min_exponent,
        max_exponent,
        proj_coord,
        y_prime: projection.len(),
        y_high,
        energy_sum,
        degenerate: x.len() <= 1,
    };
    VitalReport { fibers: rows, summary }
}

impl VitalReport {
    /// Fiber rows carry kind,y,fiber_size,exponent; the summary row fills
    /// the remaining columns.
    pub fn csv_header() -> &'static str {
        "kind,y,fiber_size,exponent,x_size,x_bound,y_size,min_fiber,max_fiber,min_exponent,max_exponent,proj_coord,y_prime,y_high,energy_sum,degenerate"
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .fibers
            .iter()
            .map(|r| {
                let y: Vec<String> = r.y.iter().map(|c| c.to_string()).collect();
                format!("fiber,{},{},{},,,,,,,,,,,,", y.join("-"), r.size, fmt_opt(r.exponent))
            })
            .collect();
        let s = &self.summary;
        out.push(format!(
            "summary,,,,{},{:.6},{},{},{},{},{},{},{},{},{},{}",
            s.x_size,
            s.x_bound,
            s.y_size,
            s.min_fiber,
            s.max_fiber,
            fmt_opt(s.min_exponent),
            fmt_opt(s.max_exponent),
            s.proj_coord,
            s.y_prime,
            s.y_high,
            s.energy_sum,
            s.degenerate
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_matrix::SquareMatrix;
    use crate::growth::standard_generators;
    use crate::trace_lab::lindep_check;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn set(p: u32, xs: &[u32]) -> ScalarSet {
        ScalarSet::new(f(p), xs.iter().copied()).unwrap()
    }

    #[test]
    fn energy_examples() {
        assert_eq!(additive_energy(&set(7, &[1, 2]), &set(7, &[1, 2])), 6);
        assert_eq!(additive_energy(&set(7, &[]), &set(7, &[1, 2])), 0);
        let all: Vec<u32> = (0..11).collect();
        assert_eq!(additive_energy(&set(11, &all), &set(11, &all)), 1331);
    }

    #[test]
    fn dilate_examples() {
        let x = set(7, &[1, 2, 3]);
        assert_eq!(dilate(&x, f(7).elem(1)), x);
        assert_eq!(dilate(&x, f(7).elem(0)), set(7, &[0]));
        assert_eq!(dilate(&x, f(7).elem(3)), set(7, &[3, 6, 2]));
    }

    #[test]
    fn certificate_rejects_bad_pairs() {
        let x = set(7, &[1, 2]);
        let mut a = BTreeMap::new();
        a.insert(vec![1, 1], BTreeSet::from([vec![1, 1]]));
        assert!(FiberFamily::new(x.clone(), 2, a).is_ok());
        let mut b = BTreeMap::new();
        b.insert(vec![1, 1], BTreeSet::from([vec![2, 2]]));
        assert_eq!(FiberFamily::new(x, 2, b), Err(Error::CertificateFailed { value: 4 }));
    }

    #[test]
    fn single_witness_instance() {
        let field = f(7);
        let a = standard_generators(2, field);
        let t = SquareMatrix::diagonal(field, &[2, 4]);
        let d = ElementSet::singleton(t.clone()).unwrap();
        let inst = assemble_vital_instance(&a, &d, 1, Budget::default()).unwrap();
        assert_eq!(inst.y.len(), 1);
        let y = f_of(&t).unwrap().r;
        assert!(inst.fibers.fiber_size(&y) > 0);
        inst.fibers.revalidate().unwrap();
    }

    #[test]
    fn sl2_f11_instance() {
        let field = f(11);
        let a = word_ball(&standard_generators(2, field), 2, Budget::default()).unwrap();
        let a2 = word_ball(&a, 2, Budget::default()).unwrap();
        let d = a2.filter(|t| {
            t.is_regular_semisimple()
                && t.char_poly_full().roots().len() == 2
                && lindep_check(t).map(|r| r.w_conditions).unwrap_or(false)
        });
        assert!(!d.is_empty());
        let inst = assemble_vital_instance(&a, &d, 1, Budget::default()).unwrap();
        assert!(inst.y.len() <= d.len());
        inst.fibers.revalidate().unwrap();
        let rep = vital_diagnostics(&inst.x, &inst.y, &inst.fibers, 0.1);
        assert_eq!(rep.fibers.len(), inst.y.len());
        assert!(rep.summary.min_fiber > 0);
        assert_eq!(rep.csv_rows().len(), inst.y.len() + 1);
    }

    #[test]
    fn degenerate_x() {
        let x = set(7, &[0]);
        let y = VectorSet::new(f(7), 2, [vec![1, 1], vec![2, 3]]).unwrap();
        let mut a = BTreeMap::new();
        a.insert(vec![1, 1], BTreeSet::from([vec![0, 0]]));
        let fibers = FiberFamily::new(x.clone(), 2, a).unwrap();
        let rep = vital_diagnostics(&x, &y, &fibers, 0.5);
        assert!(rep.summary.degenerate);
        assert!(rep.fibers.iter().all(|r| r.exponent.is_none()));
        assert_eq!(rep.fibers.iter().find(|r| r.y == vec![2, 3]).unwrap().size, 0);
        assert_eq!(rep.summary.min_fiber, 0);
    }
}
