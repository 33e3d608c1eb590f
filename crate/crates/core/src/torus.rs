//! Maximal tori realised as centralizers of regular semisimple elements,
//! torus-intersection scans, character kernels, and semisimple class
//! counts.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field_matrix::{KappaVector, PrimeField, SquareMatrix};
use crate::growth::{BallExpander, Budget, ElementSet};

/// Largest p^n for which torus points are enumerated explicitly.
pub const MAX_TORUS_ENUMERATION: u64 = 20_000_000;

/// A maximal torus T(K) = C_{G(K)}(g₀), identified by a regular
/// semisimple witness g₀.
#[derive(Clone, Debug)]
pub struct TorusHandle {
    witness: SquareMatrix,
    kappa: KappaVector,
    factor_degrees: Vec<usize>,
    eigenvalues: Option<Vec<u32>>,
}

impl TorusHandle {
    pub fn new(witness: SquareMatrix) -> Result<Self> {
        let cp = witness.char_poly_full();
        if !cp.is_squarefree() {
            return Err(Error::InvalidWitness);
        }
        let kappa = witness.char_poly()?;
        let factor_degrees = cp.factor_degrees();
        let eigenvalues = if factor_degrees.iter().all(|&d| d == 1) {
            Some(cp.roots())
        } else {
            None
        };
        Ok(TorusHandle { witness, kappa, factor_degrees, eigenvalues })
    }

    pub fn witness(&self) -> &SquareMatrix {
        &self.witness
    }

    pub fn kappa(&self) -> &KappaVector {
        &self.kappa
    }

    pub fn n(&self) -> usize {
        self.witness.n()
    }

    pub fn field(&self) -> PrimeField {
        self.witness.field()
    }

    /// Whether the witness has all its eigenvalues in F_p.
    pub fn is_split(&self) -> bool {
        self.eigenvalues.is_some()
    }

    /// Eigenvalues in ascending order, when the torus is split.
    pub fn eigenvalues(&self) -> Option<&[u32]> {
        self.eigenvalues.as_deref()
    }

    /// Degrees of the irreducible factors of the witness's characteristic
    /// polynomial.
    pub fn factor_degrees(&self) -> &[usize] {
        &self.factor_degrees
    }

    /// |T(K)| = ∏ (p^{d_i} - 1) / (p - 1), from the centralizer algebra
    /// F_p[g₀] ≅ ∏ F_{p^{d_i}} and surjectivity of the norm.
    pub fn order(&self) -> u64 {
        let p = self.field().p() as u64;
        let units: u64 = self.factor_degrees.iter().map(|&d| p.pow(d as u32) - 1).product();
        units / (p - 1)
    }

    pub fn contains(&self, h: &SquareMatrix) -> bool {
        h.is_special() && h.commutes_with(&self.witness)
    }

    /// Whether two witnesses define the same torus. A regular element lying
    /// in the centralizer of another regular element has the same
    /// centralizer, so commuting decides it.
    pub fn same_torus(&self, other: &TorusHandle) -> bool {
        self.witness.commutes_with(&other.witness)
    }

    /// All points of T(K), as the determinant-one elements of the
    /// polynomial algebra F_p[g₀].
    pub fn elements(&self) -> Result<ElementSet> {
        let n = self.n();
        let field = self.field();
        let p = field.p() as u64;
        let count = p.checked_pow(n as u32).unwrap_or(u64::MAX);
        if count > MAX_TORUS_ENUMERATION {
            return Err(Error::BudgetExceeded { partial: 0 });
        }
        let mut powers = vec![SquareMatrix::identity(n, field)];
        for k in 1..n {
            powers.push(powers[k - 1].mul_unchecked(&self.witness));
        }
        let mut members = Vec::new();
        let mut coeffs = vec![0u32; n];
        for _ in 0..count {
            let mut acc = SquareMatrix::scalar(n, field, 0);
            for (c, pw) in coeffs.iter().zip(&powers) {
                if *c != 0 {
                    acc = acc.add(&pw.scale(*c));
                }
            }
            if acc.det() == 1 {
                members.push(acc);
            }
            for c in coeffs.iter_mut() {
                *c += 1;
                if *c < field.p() {
                    break;
                }
                *c = 0;
            }
        }
        Ok(ElementSet::from_unsorted(n, field, members))
    }

    /// Eigenbasis change of coordinates P (columns are eigenvectors for the
    /// ascending eigenvalues) and its inverse.
    fn eigenbasis(&self) -> Result<(SquareMatrix, SquareMatrix)> {
        let eig = self.eigenvalues.as_ref().ok_or(Error::UnsupportedTorus)?;
        let n = self.n();
        let field = self.field();
        let mut cols = Vec::with_capacity(n);
        for &lambda in eig {
            let shifted = self.witness.add(&SquareMatrix::scalar(n, field, field.neg(lambda)));
            cols.push(kernel_vector(&shifted));
        }
        let mut entries = vec![0u32; n * n];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                entries[i * n + j] = col[i];
            }
        }
        let pmat = SquareMatrix::from_entries(n, field, &entries)?;
        let pinv = pmat.inverse()?;
        Ok((pmat, pinv))
    }
}

/// A nonzero vector in the kernel of a singular matrix.
fn kernel_vector(m: &SquareMatrix) -> Vec<u32> {
    let n = m.n();
    let f = m.field();
    let mut rows = m.rows();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(piv) = (r..n).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(piv, r);
        let inv = f.inv(rows[r][col]).unwrap();
        for c in 0..n {
            rows[r][c] = f.mul(rows[r][c], inv);
        }
        for i in 0..n {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for c in 0..n {
                    rows[i][c] = f.sub(rows[i][c], f.mul(factor, rows[r][c]));
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("matrix is singular");
    let mut v = vec![0u32; n];
    v[free] = 1;
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = f.neg(rows[row][free]);
    }
    v
}

/// {h ∈ A_k : h g₀ = g₀ h}; equal to T(K) when A_k = G(K).
pub fn centralizer_torus(a_k: &ElementSet, g0: &SquareMatrix) -> Result<ElementSet> {
    if !g0.is_regular_semisimple() {
        return Err(Error::InvalidWitness);
    }
    Ok(a_k.filter(|h| h.commutes_with(g0)))
}

/// A character t ↦ ∏ λ_i(t)^{m_i} in eigenvalue coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterSpec {
    exponents: Vec<i64>,
}

impl CharacterSpec {
    pub fn new(exponents: Vec<i64>, bound: u64) -> Result<Self> {
        if exponents.iter().all(|&m| m == 0) {
            return Err(Error::InvalidCharacter("all exponents are zero".into()));
        }
        if let Some(m) = exponents.iter().find(|m| m.unsigned_abs() > bound) {
            return Err(Error::InvalidCharacter(format!("exponent {m} exceeds bound {bound}")));
        }
        Ok(CharacterSpec { exponents })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }

    fn eval(&self, field: PrimeField, coords: &[u32]) -> u32 {
        let order = field.p() as i64 - 1;
        self.exponents.iter().zip(coords).fold(1, |acc, (&m, &x)| {
            field.mul(acc, field.pow(x, m.rem_euclid(order) as u64))
        })
    }
}

/// Members of the torus of g₀ lying in the kernel of the character.
/// Coordinates are read in the eigenbasis of g₀ with eigenvalues sorted
/// ascending; nonsplit witnesses are rejected.
pub fn character_kernel_members(
    t_elems: &ElementSet,
    spec: &CharacterSpec,
    g0: &SquareMatrix,
) -> Result<ElementSet> {
    let torus = TorusHandle::new(g0.clone())?;
    if spec.exponents.len() != torus.n() {
        return Err(Error::DimensionMismatch(spec.exponents.len(), torus.n()));
    }
    let (pmat, pinv) = torus.eigenbasis()?;
    let field = torus.field();
    let mut kept = Vec::new();
    for t in t_elems.iter() {
        if !t.commutes_with(g0) {
            return Err(Error::NotInTorus);
        }
        let d = pinv.mul_unchecked(t).mul_unchecked(&pmat);
        let coords: Vec<u32> = (0..torus.n()).map(|i| d.get(i, i)).collect();
        if spec.eval(field, &coords) == 1 {
            kept.push(t.clone());
        }
    }
    Ok(ElementSet::from_unsorted(t_elems.n(), field, kept))
}

/// Eigenvalue coordinates of a torus element in the witness's eigenbasis.
pub fn torus_coordinates(torus: &TorusHandle, t: &SquareMatrix) -> Result<Vec<u32>> {
    if !t.commutes_with(torus.witness()) {
        return Err(Error::NotInTorus);
    }
    let (pmat, pinv) = torus.eigenbasis()?;
    let d = pinv.mul_unchecked(t).mul_unchecked(&pmat);
    Ok((0..torus.n()).map(|i| d.get(i, i)).collect())
}

/// (# distinct κ among regular semisimple members,
///  # members that are semisimple but not regular).
pub fn count_semisimple_classes(b: &ElementSet) -> (usize, usize) {
    let mut kappas = BTreeSet::new();
    let mut nonregular = 0;
    for g in b.iter() {
        match g.classify_semisimple() {
            crate::field_matrix::SemisimplicityClass::RegularSemisimple => {
                kappas.insert(g.char_poly().expect("members have unit determinant"));
            }
            crate::field_matrix::SemisimplicityClass::SemisimpleNotRegular => nonregular += 1,
            crate::field_matrix::SemisimplicityClass::NotSemisimple => {}
        }
    }
    (kappas.len(), nonregular)
}

/// Intersection statistics of word balls with one maximal torus.
#[derive(Clone, Debug, Serialize)]
pub struct TorusReport {
    #[serde(skip)]
    pub witness: SquareMatrix,
    pub witness_kappa: String,
    pub torus_order: u64,
    pub split: bool,
    pub intersection_sizes: BTreeMap<u32, usize>,
    /// |A_k ∩ T(K)| / |A_k|^{1/(n+1)}.
    pub richness_ratio: BTreeMap<u32, f64>,
    /// Regular semisimple elements in the intersection at the largest k.
    pub regular_count: usize,
}

impl TorusReport {
    pub fn csv_header(ks: &[u32]) -> String {
        let mut cols: Vec<String> =
            ["witness_kappa", "torus_order", "split_flag"].map(String::from).to_vec();
        for k in ks {
            cols.push(format!("intersection_{k}"));
            cols.push(format!("ratio_{k}"));
        }
        cols.push("regular_count".into());
        cols.join(",")
    }

    pub fn csv_row(&self) -> String {
        let mut cols =
            vec![self.witness_kappa.clone(), self.torus_order.to_string(), (self.split as u8).to_string()];
        for (k, size) in &self.intersection_sizes {
            cols.push(size.to_string());
            cols.push(format!("{:.6}", self.richness_ratio[k]));
        }
        cols.push(self.regular_count.to_string());
        cols.join(",")
    }
}

/// For each κ-distinct regular semisimple witness in A_{max k} (merged
/// when two witnesses share a torus), the sizes |A_k ∩ T(K)| and richness
/// ratios. Sorted by descending intersection at the largest k.
pub fn rich_torus_scan(a: &ElementSet, ks: &[u32], budget: Budget) -> Result<Vec<TorusReport>> {
    let mut ks: Vec<u32> = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    if ks.is_empty() || ks[0] == 0 {
        return Err(Error::Config("k list must be nonempty and positive".into()));
    }
    let mut ex = BallExpander::new(a, budget)?;
    let mut balls = BTreeMap::new();
    for &k in &ks {
        ex.advance_to(k)?;
        balls.insert(k, ex.to_set());
    }
    let kmax = *ks.last().unwrap();
    Ok(scan_balls(&balls, kmax))
}

/// The scan over precomputed balls A_k.
pub fn scan_balls(balls: &BTreeMap<u32, ElementSet>, kmax: u32) -> Vec<TorusReport> {
    let top = &balls[&kmax];
    let n = top.n();
    let mut seen_kappa = BTreeSet::new();
    let mut tori: Vec<TorusHandle> = Vec::new();
    for g in top.iter() {
        if !g.is_regular_semisimple() {
            continue;
        }
        let kappa = g.char_poly().expect("members have unit determinant");
        if !seen_kappa.insert(kappa) {
            continue;
        }
        let handle = TorusHandle::new(g.clone()).expect("regular semisimple witness");
        if tori.iter().any(|t| t.same_torus(&handle)) {
            continue;
        }
        tori.push(handle);
    }
    let mut reports: Vec<TorusReport> = tori
        .into_iter()
        .map(|torus| {
            let mut intersection_sizes = BTreeMap::new();
            let mut richness_ratio = BTreeMap::new();
            let mut regular_count = 0;
            for (&k, ball) in balls {
                let inter: Vec<&SquareMatrix> =
                    ball.iter().filter(|h| h.commutes_with(torus.witness())).collect();
                let denom = (ball.len() as f64).powf(1.0 / (n as f64 + 1.0));
                intersection_sizes.insert(k, inter.len());
                richness_ratio.insert(k, inter.len() as f64 / denom);
                if k == kmax {
                    regular_count = inter.iter().filter(|h| h.is_regular_semisimple()).count();
                }
            }
            TorusReport {
                witness_kappa: torus.kappa().hex(),
                torus_order: torus.order(),
                split: torus.is_split(),
                witness: torus.witness,
                intersection_sizes,
                richness_ratio,
                regular_count,
            }
        })
        .collect();
    reports.sort_by(|a, b| {
        b.intersection_sizes[&kmax]
            .cmp(&a.intersection_sizes[&kmax])
            .then_with(|| a.witness.cmp(&b.witness))
    });
    reports
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::enumerate_group;

    fn f(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn m(p: u32, rows: &[&[i64]]) -> SquareMatrix {
        SquareMatrix::from_rows(f(p), rows).unwrap()
    }

    #[test]
    fn centralizer_examples_in_sl2_f5() {
        let g = enumerate_group(2, f(5), Budget::default()).unwrap();
        let split = centralizer_torus(&g, &m(5, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(split.len(), 4);
        assert!(split.iter().all(|h| h.get(0, 1) == 0 && h.get(1, 0) == 0));
        // λ² + 1 = (λ - 2)(λ - 3) over F_5, so the Weyl element is split.
        let weyl = centralizer_torus(&g, &m(5, &[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(weyl.len(), 4);
        let nonsplit = centralizer_torus(&g, &m(5, &[&[0, 1], &[-1, 1]])).unwrap();
        assert_eq!(nonsplit.len(), 6);
        let trivial = ElementSet::identity(2, f(5));
        assert_eq!(centralizer_torus(&trivial, &m(5, &[&[2, 0], &[0, 3]])).unwrap(), trivial);
        assert_eq!(
            centralizer_torus(&g, &m(5, &[&[1, 1], &[0, 1]])),
            Err(Error::InvalidWitness)
        );
    }

    #[test]
    fn enumerated_torus_matches_order_formula() {
        let t = TorusHandle::new(m(5, &[&[0, 1], &[-1, 1]])).unwrap();
        assert!(!t.is_split());
        assert_eq!(t.order(), 6);
        assert_eq!(t.elements().unwrap().len(), 6);
        let s = TorusHandle::new(m(5, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(s.eigenvalues(), Some(&[2, 3][..]));
        assert_eq!(s.order(), 4);
    }

    #[test]
    fn character_kernels_on_split_torus() {
        let g0 = m(5, &[&[2, 0], &[0, 3]]);
        let torus = TorusHandle::new(g0.clone()).unwrap().elements().unwrap();
        let sq = CharacterSpec::new(vec![2, 0], 4).unwrap();
        let kernel = character_kernel_members(&torus, &sq, &g0).unwrap();
        assert_eq!(kernel.members(), &[m(5, &[&[1, 0], &[0, 1]]), m(5, &[&[4, 0], &[0, 4]])]);
        let det = CharacterSpec::new(vec![1, 1], 4).unwrap();
        assert_eq!(character_kernel_members(&torus, &det, &g0).unwrap(), torus);
        let first = CharacterSpec::new(vec![1, 0], 4).unwrap();
        assert_eq!(
            character_kernel_members(&torus, &first, &g0).unwrap(),
            ElementSet::identity(2, f(5))
        );
        let neg = CharacterSpec::new(vec![-1, 0], 4).unwrap();
        assert_eq!(character_kernel_members(&torus, &neg, &g0).unwrap().len(), 1);
    }

    #[test]
    fn character_spec_validation() {
        assert!(CharacterSpec::new(vec![0, 0], 3).is_err());
        assert!(CharacterSpec::new(vec![4, 0], 3).is_err());
        let nonsplit = m(5, &[&[0, 1], &[-1, 1]]);
        let torus = TorusHandle::new(nonsplit.clone()).unwrap().elements().unwrap();
        let spec = CharacterSpec::new(vec![1, 0], 3).unwrap();
        assert_eq!(
            character_kernel_members(&torus, &spec, &nonsplit),
            Err(Error::UnsupportedTorus)
        );
    }

    #[test]
    fn class_count_examples() {
        assert_eq!(count_semisimple_classes(&ElementSet::identity(2, f(5))), (0, 1));
        let pair = ElementSet::new(
            2,
            f(5),
            [m(5, &[&[2, 0], &[0, 3]]), m(5, &[&[3, 0], &[0, 2]])],
        )
        .unwrap();
        assert_eq!(count_semisimple_classes(&pair), (1, 0));
    }

    #[test]
    fn scan_of_identity_plus_witness() {
        let g0 = m(7, &[&[2, 0], &[0, 4]]);
        let a = ElementSet::new(
            2,
            f(7),
            [SquareMatrix::identity(2, f(7)), g0.clone(), g0.inverse().unwrap()],
        )
        .unwrap();
        let reports = rich_torus_scan(&a, &[1], Budget::default()).unwrap();
        let own = reports.iter().find(|r| r.witness.commutes_with(&g0)).unwrap();
        assert!(own.intersection_sizes[&1] >= 3);
    }

    #[test]
    fn scan_without_regular_elements_is_empty() {
        let u = ElementSet::singleton(m(5, &[&[1, 1], &[0, 1]])).unwrap();
        assert!(rich_torus_scan(&u, &[1, 2], Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn scan_of_sl2_f5() {
        let g = enumerate_group(2, f(5), Budget::default()).unwrap();
        let reports = rich_torus_scan(&g, &[1], Budget::default()).unwrap();
        let top = &reports[0];
        assert!([4, 5, 6].contains(&top.torus_order));
        let denom = 120f64.cbrt();
        for r in &reports {
            assert_eq!(r.intersection_sizes[&1] as u64, r.torus_order);
            assert!((r.richness_ratio[&1] - r.torus_order as f64 / denom).abs() < 1e-12);
        }
        let split = reports.iter().find(|r| r.split).unwrap();
        assert!((split.richness_ratio[&1] - 0.8109).abs() < 1e-3);
    }
}
