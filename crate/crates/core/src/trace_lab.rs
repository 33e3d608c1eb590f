//! Trace tuples, wealth, dyadic bins, and the Cayley–Hamilton map f.
//!
//! Everything here is parameterised by a regular semisimple element t and a
//! pool of group elements g; the quantities of interest are the traces and
//! conjugacy invariants of the shifted elements tⁱg for 0 ≤ i ≤ n.

use std::collections::{BTreeMap, BTreeSet};

use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_matrix::{linalg, Fp, KappaVector, PrimeField, SquareMatrix};
use crate::growth::ElementSet;
use crate::vandermonde::elementary_symmetric;

/// (tr(t⁰g), ..., tr(tⁿg)) with the entry at `omitted` removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceTuple {
    pub omitted: usize,
    pub values: Vec<u32>,
}

/// (κ(t⁰g), ..., κ(tⁿg)) with the entry at `omitted` removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassTuple {
    pub omitted: usize,
    pub values: Vec<KappaVector>,
}

/// t⁰, t¹, ..., tⁿ by repeated multiplication.
pub fn powers(t: &SquareMatrix) -> Vec<SquareMatrix> {
    let n = t.n();
    let mut out = Vec::with_capacity(n + 1);
    out.push(SquareMatrix::identity(n, t.field()));
    for k in 1..=n {
        out.push(out[k - 1].mul_unchecked(t));
    }
    out
}

fn check_index(i: usize, n: usize) -> Result<()> {
    if i > n {
        Err(Error::OutOfRange { index: i, max: n })
    } else {
        Ok(())
    }
}

pub fn trace_tuple(g: &SquareMatrix, t: &SquareMatrix, i: usize) -> Result<TraceTuple> {
    check_index(i, t.n())?;
    let g_field = g.field();
    if g_field != t.field() {
        return Err(Error::FieldMismatch(g_field.p(), t.field().p()));
    }
    let values = powers(t)
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, tk)| tk.try_mul(g).map(|h| h.trace()))
        .collect::<Result<_>>()?;
    Ok(TraceTuple { omitted: i, values })
}

pub fn class_tuple(g: &SquareMatrix, t: &SquareMatrix, i: usize) -> Result<ClassTuple> {
    check_index(i, t.n())?;
    let values = powers(t)
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != i)
        .map(|(_, tk)| tk.try_mul(g)?.char_poly())
        .collect::<Result<_>>()?;
    Ok(ClassTuple { omitted: i, values })
}

fn require_regular(t: &SquareMatrix) -> Result<()> {
    if t.is_regular_semisimple() {
        Ok(())
    } else {
        Err(Error::InvalidWitness)
    }
}

/// Per-pool wealth data for a fixed t: for each i and trace value r, the
/// set of κ(tⁱg) over pool members with tr(tⁱg) = r and tⁱg semisimple.
#[derive(Clone, Debug)]
pub struct WealthTable {
    t: SquareMatrix,
    powers: Vec<SquareMatrix>,
    classes: Vec<FxHashMap<u32, BTreeSet<KappaVector>>>,
}

/// Per-element data reused by binning.
struct ShiftInfo {
    traces: Vec<u32>,
    all_semisimple: bool,
}

impl WealthTable {
    pub fn build(t: &SquareMatrix, pool: &ElementSet) -> Result<Self> {
        Ok(Self::build_with_info(t, pool)?.0)
    }

    fn build_with_info(t: &SquareMatrix, pool: &ElementSet) -> Result<(Self, Vec<ShiftInfo>)> {
        require_regular(t)?;
        let n = t.n();
        let powers = powers(t);
        let mut classes = vec![FxHashMap::default(); n + 1];
        let mut info = Vec::with_capacity(pool.len());
        for g in pool.iter() {
            let mut traces = Vec::with_capacity(n + 1);
            let mut all_semisimple = true;
            for (i, tk) in powers.iter().enumerate() {
                let h = tk.mul_unchecked(g);
                let tr = h.trace();
                traces.push(tr);
                if h.classify_semisimple().is_semisimple() {
                    let kappa = h.char_poly()?;
                    classes[i].entry(tr).or_insert_with(BTreeSet::new).insert(kappa);
                } else {
                    all_semisimple = false;
                }
            }
            info.push(ShiftInfo { traces, all_semisimple });
        }
        Ok((WealthTable { t: t.clone(), powers, classes }, info))
    }

    pub fn t(&self) -> &SquareMatrix {
        &self.t
    }

    pub fn powers(&self) -> &[SquareMatrix] {
        &self.powers
    }

    /// ◇_{t,i}(r).
    pub fn wealth(&self, i: usize, r: u32) -> usize {
        self.classes[i].get(&r).map_or(0, |s| s.len())
    }
}

/// ◇_{t,i}(r): the number of distinct κ(tⁱg) over g in the pool with
/// tr(tⁱg) = r and tⁱg semisimple.
pub fn wealth(t: &SquareMatrix, i: usize, r: Fp, pool: &ElementSet) -> Result<usize> {
    require_regular(t)?;
    check_index(i, t.n())?;
    let ti = t.pow(i as u64);
    let kappas: Result<BTreeSet<KappaVector>> = pool
        .iter()
        .map(|g| ti.mul_unchecked(g))
        .filter(|h| h.trace() == r.value() && h.classify_semisimple().is_semisimple())
        .map(|h| h.char_poly())
        .collect();
    Ok(kappas?.len())
}

/// Dyadic level j with 2^j ≤ w < 2^{j+1}; w must be positive.
pub fn dyadic_level(w: usize) -> u32 {
    debug_assert!(w > 0);
    usize::BITS - 1 - w.leading_zeros()
}

/// A_{t,j}: pool elements g with g, tg, ..., tⁿg semisimple and
/// 2^{j_i} ≤ ◇_{t,i}(tr(tⁱg)) < 2^{j_i+1} for every i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WealthBin {
    pub t: SquareMatrix,
    pub jvec: Vec<u32>,
    pub members: ElementSet,
}

impl WealthBin {
    pub fn csv_header() -> &'static str {
        "t_kappa,jvec,member_count"
    }

    pub fn csv_row(&self) -> String {
        let kappa = self.t.char_poly().map(|k| k.hex()).unwrap_or_default();
        let jvec: Vec<String> = self.jvec.iter().map(|j| j.to_string()).collect();
        format!("{},{},{}", kappa, jvec.join("-"), self.members.len())
    }
}

/// Partition the eligible part of the pool into nonempty dyadic bins,
/// ordered by jvec.
pub fn dyadic_bins(t: &SquareMatrix, pool: &ElementSet) -> Result<Vec<WealthBin>> {
    let (table, info) = WealthTable::build_with_info(t, pool)?;
    let mut bins: BTreeMap<Vec<u32>, Vec<SquareMatrix>> = BTreeMap::new();
    for (g, inf) in pool.iter().zip(&info) {
        if !inf.all_semisimple {
            continue;
        }
        let jvec = inf
            .traces
            .iter()
            .enumerate()
            .map(|(i, &tr)| dyadic_level(table.wealth(i, tr)))
            .collect();
        bins.entry(jvec).or_default().push(g.clone());
    }
    Ok(bins
        .into_iter()
        .map(|(jvec, members)| WealthBin {
            t: t.clone(),
            jvec,
            members: ElementSet::from_unsorted(pool.n(), pool.field(), members),
        })
        .collect())
}

/// The bin with the most members; ties go to the lexicographically
/// smallest jvec.
pub fn popular_tuple(bins: &[WealthBin]) -> Result<&WealthBin> {
    bins.iter()
        .min_by(|a, b| b.members.len().cmp(&a.members.len()).then_with(|| a.jvec.cmp(&b.jvec)))
        .ok_or(Error::NoBins)
}

/// max over bins with at least `threshold` members of (max_i j_i - min_i j_i).
pub fn bin_spread(bins: &[WealthBin], threshold: usize) -> u32 {
    bins.iter()
        .filter(|b| b.members.len() >= threshold)
        .map(|b| {
            let hi = b.jvec.iter().max().copied().unwrap_or(0);
            let lo = b.jvec.iter().min().copied().unwrap_or(0);
            hi - lo
        })
        .max()
        .unwrap_or(0)
}

/// Coefficients r with tr(tⁿg) = Σ_k r_k tr(tᵏg) for all g.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FVector {
    pub r: Vec<u32>,
}

impl FVector {
    pub fn dot(&self, field: PrimeField, xs: &[u32]) -> u32 {
        self.r.iter().zip(xs).fold(0, |acc, (&r, &x)| field.add(acc, field.mul(r, x)))
    }
}

/// f(t): r_k = -a_k for 1 ≤ k ≤ n-1 and r_0 = (-1)^{n+1}, by
/// Cayley–Hamilton applied to det(λI - t).
pub fn f_of(t: &SquareMatrix) -> Result<FVector> {
    require_regular(t)?;
    let kappa = t.char_poly()?;
    let field = t.field();
    let n = t.n();
    let mut r = Vec::with_capacity(n);
    r.push(field.sign(n + 1));
    for k in 1..n {
        r.push(field.neg(kappa.a(k)));
    }
    Ok(FVector { r })
}

/// Outcome of comparing |f(S)| with |S|/n!.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberBound {
    pub image_size: usize,
    pub set_size: usize,
    pub n_factorial: u64,
}

impl FiberBound {
    pub fn bound(&self) -> f64 {
        self.set_size as f64 / self.n_factorial as f64
    }

    pub fn holds(&self) -> bool {
        self.image_size as u64 * self.n_factorial >= self.set_size as u64
    }
}

/// |f(S)| for a set of commuting regular semisimple elements, failing if
/// it drops below |S|/n!.
pub fn fiber_bound_check(s: &ElementSet) -> Result<FiberBound> {
    let mut image = BTreeSet::new();
    let first = s.members().first();
    for t in s.iter() {
        if let Some(f0) = first {
            if !t.commutes_with(f0) {
                return Err(Error::NotInTorus);
            }
        }
        image.insert(f_of(t)?);
    }
    let n_factorial = (1..=s.n() as u64).product();
    let out = FiberBound { image_size: image.len(), set_size: s.len(), n_factorial };
    if !out.holds() {
        return Err(Error::FiberBoundViolated {
            image: out.image_size,
            size: out.set_size,
            factorial: n_factorial,
        });
    }
    Ok(out)
}

/// Rank data for the forms l_i(g) = tr(tⁱg) restricted to the diagonal of
/// the eigenbasis of t.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LindepReport {
    pub dependent_all: bool,
    pub independent_subsets: bool,
    /// Omitted row indices whose remaining n rows are singular.
    pub singular_omitted: Vec<usize>,
    /// Distinct eigenvalues and e_m(s) ≠ 0 for every m.
    pub w_conditions: bool,
}

pub fn lindep_check(t: &SquareMatrix) -> Result<LindepReport> {
    let cp = t.char_poly_full();
    let roots = cp.roots();
    let n = t.n();
    let field = t.field();
    if roots.len() != n {
        return Err(Error::UnsupportedTorus);
    }
    let rows: Vec<Vec<u32>> =
        (0..=n).map(|i| roots.iter().map(|&s| field.pow(s, i as u64)).collect()).collect();
    let dependent_all = linalg::rank(field, rows.clone()) <= n;
    let singular_omitted: Vec<usize> = (0..=n)
        .filter(|&i| {
            let sub: Vec<Vec<u32>> =
                rows.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, r)| r.clone()).collect();
            linalg::rank(field, sub) < n
        })
        .collect();
    let s: Vec<Fp> = roots.iter().map(|&x| field.elem(x)).collect();
    let w_conditions = (1..=n).all(|m| !elementary_symmetric(&s, m).unwrap().is_zero());
    Ok(LindepReport {
        dependent_all,
        independent_subsets: singular_omitted.is_empty(),
        singular_omitted,
        w_conditions,
    })
}

/// Number of distinct trace tuples and of distinct class tuples (over g
/// with g, ..., tⁿg semisimple) for each omitted index i.
pub fn tuple_counts(t: &SquareMatrix, pool: &ElementSet) -> Result<Vec<(usize, usize, usize)>> {
    require_regular(t)?;
    let n = t.n();
    let pw = powers(t);
    let mut per_g = Vec::with_capacity(pool.len());
    for g in pool.iter() {
        let shifted: Vec<SquareMatrix> = pw.iter().map(|tk| tk.mul_unchecked(g)).collect();
        let traces: Vec<u32> = shifted.iter().map(|h| h.trace()).collect();
        let ss = shifted.iter().all(|h| h.classify_semisimple().is_semisimple());
        let kappas: Vec<KappaVector> =
            shifted.iter().map(|h| h.char_poly()).collect::<Result<_>>()?;
        per_g.push((traces, kappas, ss));
    }
    Ok((0..=n)
        .map(|i| {
            let mut tr = BTreeSet::new();
            let mut cl = BTreeSet::new();
            for (traces, kappas, ss) in &per_g {
                let tt: Vec<u32> =
                    traces.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| *v).collect();
                tr.insert(tt);
                if *ss {
                    let ct: Vec<&KappaVector> =
                        kappas.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, v)| v).collect();
                    cl.insert(ct);
                }
            }
            (i, tr.len(), cl.len())
        })
        .collect())
}
