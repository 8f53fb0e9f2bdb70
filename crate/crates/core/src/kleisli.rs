//! Kleisli morphisms of matrix-representable monads.
//!
//! A [`KMatrix`] with `p` rows and `q` columns is a morphism `p ⇸ q`: entry
//! `[i][j]` is the weight of `j` in the image of `i`. Rows are sources and
//! columns targets, so `f.compose(&g)` reads "`f`, then `g`" (the opposite
//! of the usual `g ∘ f` notation).

use std::fmt::Write as _;

use crate::algebra::Semiring;
use crate::error::{Error, Result};
use crate::report::LawReport;

/// Default iteration bound for [`KMatrix::star`].
pub const DEFAULT_STAR_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct KMatrix<S: Semiring> {
    spec: S,
    rows: usize,
    cols: usize,
    data: Vec<S::Elem>,
}

pub(crate) fn check_spec<S: Semiring>(a: &S, b: &S) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::SpecMismatch {
            left: a.name(),
            right: b.name(),
        })
    }
}

fn shape(r: usize, c: usize) -> String {
    format!("{r}x{c}")
}

impl<S: Semiring> KMatrix<S> {
    pub fn zeros(spec: S, rows: usize, cols: usize) -> Self {
        let data = vec![spec.zero(); rows * cols];
        Self {
            spec,
            rows,
            cols,
            data,
        }
    }

    pub fn identity(spec: S, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.data[i * n + i] = m.spec.one();
        }
        m
    }

    pub fn from_fn(
        spec: S,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> S::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self {
            spec,
            rows,
            cols,
            data,
        }
    }

    /// Builds a matrix from rows; `cols` is needed to type the zero-row case.
    pub fn from_rows(spec: S, cols: usize, rows: Vec<Vec<S::Elem>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: format!("{cols} columns"),
                    found: format!("{} columns", row.len()),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            spec,
            rows: n,
            cols,
            data,
        })
    }

    /// The Kleisli image of a base function `i ↦ f[i]` from `p = f.len()` to `q`.
    pub fn base_map(spec: S, f: &[usize], q: usize) -> Result<Self> {
        if let Some(&bad) = f.iter().find(|&&j| j >= q) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                bound: q,
            });
        }
        let mut m = Self::zeros(spec, f.len(), q);
        for (i, &j) in f.iter().enumerate() {
            m.data[i * q + j] = m.spec.one();
        }
        Ok(m)
    }

    pub fn spec(&self) -> &S {
        &self.spec
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S::Elem) {
        self.data[i * self.cols + j] = value;
    }

    /// `self[i][j] ← self[i][j] ⊕ value`.
    pub fn accumulate(&mut self, i: usize, j: usize, value: &S::Elem) {
        let k = i * self.cols + j;
        self.data[k] = self.spec.plus(&self.data[k], value);
    }

    pub fn row(&self, i: usize) -> &[S::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[S::Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.spec.is_zero(x))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        check_spec(&self.spec, &other.spec)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: shape(self.rows, self.cols),
                found: shape(other.rows, other.cols),
            });
        }
        Ok(())
    }

    /// Kleisli composition, `self` first: `[i][k] = ⊕_j self[i][j] ⊗ g[j][k]`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        check_spec(&self.spec, &g.spec)?;
        if self.cols != g.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                found: format!("{} rows", g.rows),
            });
        }
        let s = &self.spec;
        let mut out = Self::zeros(s.clone(), self.rows, g.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if s.is_zero(a) {
                    continue;
                }
                for k in 0..g.cols {
                    let prod = s.times(a, g.get(j, k));
                    out.accumulate(i, k, &prod);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[S::Elem]) -> Result<Vec<S::Elem>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("vector of length {}", self.rows),
                found: format!("vector of length {}", v.len()),
            });
        }
        let s = &self.spec;
        let mut out = vec![s.zero(); self.cols];
        for (j, a) in v.iter().enumerate() {
            if s.is_zero(a) {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                *o = s.plus(o, &s.times(a, self.get(j, k)));
            }
        }
        Ok(out)
    }

    /// Entrywise `⊕`.
    pub fn join(&self, g: &Self) -> Result<Self> {
        self.check_same_shape(g)?;
        let s = &self.spec;
        let data = self
            .data
            .iter()
            .zip(&g.data)
            .map(|(a, b)| s.plus(a, b))
            .collect();
        Ok(Self {
            spec: s.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// The duality operator: swaps sources and targets.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.spec.clone(), self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// Pointwise order of the hom-set.
    pub fn leq(&self, g: &Self) -> Result<bool> {
        self.check_same_shape(g)?;
        Ok(self
            .data
            .iter()
            .zip(&g.data)
            .all(|(a, b)| self.spec.leq(a, b)))
    }

    /// Entrywise equality, up to tolerance on approximate carriers.
    pub fn approx_eq(&self, g: &Self) -> bool {
        self.spec == g.spec
            && self.rows == g.rows
            && self.cols == g.cols
            && self
                .data
                .iter()
                .zip(&g.data)
                .all(|(a, b)| self.spec.approx_eq(a, b))
    }

    pub(crate) fn converged_to(&self, prev: &Self) -> bool {
        self.data
            .iter()
            .zip(&prev.data)
            .all(|(a, b)| self.spec.converged(b, a))
    }

    /// Vertical stacking `[f_1; f_2; …]`, the Kleisli cotuple.
    pub fn cotuple(fs: &[Self]) -> Result<Self> {
        let Some(first) = fs.first() else {
            return Err(Error::DimensionMismatch {
                expected: "a nonempty sequence".into(),
                found: "an empty sequence".into(),
            });
        };
        let mut data = Vec::new();
        let mut rows = 0;
        for f in fs {
            check_spec(&first.spec, &f.spec)?;
            if f.cols != first.cols {
                return Err(Error::ColsMismatch {
                    expected: first.cols,
                    found: f.cols,
                });
            }
            rows += f.rows;
            data.extend(f.data.iter().cloned());
        }
        Ok(Self {
            spec: first.spec.clone(),
            rows,
            cols: first.cols,
            data,
        })
    }

    /// Block-diagonal sum of square or rectangular blocks.
    pub fn block_diagonal(spec: S, blocks: &[&Self]) -> Result<Self> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(spec, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            check_spec(&out.spec, &b.spec)?;
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(out)
    }

    /// The base function a matrix represents, when every row holds exactly
    /// one `one` and zeros elsewhere.
    pub fn as_base_function(&self) -> Result<Vec<usize>> {
        let s = &self.spec;
        let one = s.one();
        let mut f = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut target = None;
            for (j, x) in self.row(i).iter().enumerate() {
                if *x == one && target.is_none() {
                    target = Some(j);
                } else if *x != s.zero() {
                    return Err(Error::NotABaseMap(format!(
                        "row {i} has entry {} at column {j}",
                        s.format_elem(x)
                    )));
                }
            }
            match target {
                Some(j) => f.push(j),
                None => return Err(Error::NotABaseMap(format!("row {i} has no `one`"))),
            }
        }
        Ok(f)
    }

    /// Verifies that a base map `f: p ⇸ q` is left adjoint to its dual:
    /// `f∘f_ ≤ id_q` and `id_p ≤ f_∘f` (composition written right to left,
    /// i.e. `transpose(f)` then `f`, and `f` then `transpose(f)`).
    pub fn check_adjunction(&self) -> Result<LawReport> {
        self.as_base_function()?;
        let s = self.spec.clone();
        let dual = self.transpose();
        let counit = dual.compose(self)?; // q×q
        let unit = self.compose(&dual)?; // p×p
        let id_q = Self::identity(s.clone(), self.cols);
        let id_p = Self::identity(s, self.rows);

        let mut report = LawReport::new();
        report.record(
            "counit: f∘f_ <= id",
            (!counit.leq(&id_q)?).then(|| counit.to_tsv()),
        );
        report.annotate_last(if counit == id_q { "equal" } else { "strict" });
        report.record(
            "unit: id <= f_∘f",
            (!id_p.leq(&unit)?).then(|| unit.to_tsv()),
        );
        report.annotate_last(if unit == id_p { "equal" } else { "strict" });
        Ok(report)
    }

    /// Kleene star with the default iteration bound.
    pub fn star(&self) -> Result<Self> {
        self.star_with(DEFAULT_STAR_ITER)
    }

    pub fn star_with(&self, max_iter: usize) -> Result<Self> {
        self.star_iterations(max_iter).map(|(m, _)| m)
    }

    /// Least solution of `X = id ⊕ α·X`, by iterating `X_{k+1} = id ⊕ α·X_k`
    /// from `X_0 = id`. Returns the fixpoint and the number of iterations.
    ///
    /// Over a carrier with a saturating [`Semiring::divergent_sum`], entries
    /// that still change after `n` iterations (during iterations `n+1..=2n`)
    /// receive a nonzero path through a cycle, so their sum is infinite; they
    /// are set to the top and the iteration resumes.
    pub fn star_iterations(&self, max_iter: usize) -> Result<(Self, usize)> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: "a square matrix".into(),
                found: shape(self.rows, self.cols),
            });
        }
        let n = self.rows;
        let s = &self.spec;
        let id = Self::identity(s.clone(), n);
        let divergent = s.divergent_sum();
        let mut diverging = vec![false; n * n];
        let mut x = id.clone();
        for k in 1..=max_iter {
            let mut next = id.join(&self.compose(&x)?)?;
            if next.converged_to(&x) {
                return Ok((next, k));
            }
            if let Some(top) = &divergent {
                if k > n && k <= 2 * n {
                    for (idx, d) in diverging.iter_mut().enumerate() {
                        if !s.approx_eq(&next.data[idx], &x.data[idx]) {
                            *d = true;
                        }
                    }
                }
                if k == 2 * n {
                    for (idx, &d) in diverging.iter().enumerate() {
                        if d {
                            next.data[idx] = top.clone();
                        }
                    }
                }
            }
            x = next;
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
        })
    }

    /// Tab-separated rendering, one row per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|x| self.spec.format_elem(x))
                .collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{
        Boolean, ChainQuantale, ExtNonnegReal, NaturalSat, TropicalMinPlus, UnitIntervalProduct,
    };

    const INF: u64 = u64::MAX;

    fn bm(rows: &[&[u8]]) -> KMatrix<Boolean> {
        let cols = rows.first().map_or(0, |r| r.len());
        KMatrix::from_rows(
            Boolean,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| x == 1).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn relational_composition() {
        let f = bm(&[&[1, 1]]);
        let g = bm(&[&[1], &[0]]);
        assert_eq!(f.compose(&g).unwrap(), bm(&[&[1]]));
        assert_eq!(f.compose(&KMatrix::identity(Boolean, 2)).unwrap(), f);
    }

    #[test]
    fn natural_single_product() {
        let s = NaturalSat::<u64>::new();
        let a = KMatrix::from_rows(s, 1, vec![vec![2]]).unwrap();
        let b = KMatrix::from_rows(s, 1, vec![vec![3]]).unwrap();
        assert_eq!(*a.compose(&b).unwrap().get(0, 0), 6);
    }

    #[test]
    fn compose_errors() {
        let f = bm(&[&[1, 1]]);
        assert!(matches!(
            f.compose(&f),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = KMatrix::identity(ChainQuantale::new(2), 2);
        let d = KMatrix::identity(ChainQuantale::new(3), 2);
        assert!(matches!(c.compose(&d), Err(Error::SpecMismatch { .. })));
    }

    #[test]
    fn identities() {
        assert_eq!(KMatrix::identity(Boolean, 0).entries().len(), 0);
        assert_eq!(KMatrix::identity(Boolean, 2), bm(&[&[1, 0], &[0, 1]]));
        let t = KMatrix::identity(TropicalMinPlus::<u64>::new(), 2);
        assert_eq!(t.entries(), &[0, INF, INF, 0]);
    }

    #[test]
    fn base_maps() {
        assert_eq!(
            KMatrix::base_map(Boolean, &[0, 1, 2], 3).unwrap(),
            KMatrix::identity(Boolean, 3)
        );
        assert_eq!(
            KMatrix::base_map(Boolean, &[0, 0], 1).unwrap(),
            bm(&[&[1], &[1]])
        );
        let u = UnitIntervalProduct::<f64>::new();
        let swap = KMatrix::base_map(u, &[1, 0], 2).unwrap();
        assert_eq!(swap.entries(), &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(
            KMatrix::base_map(Boolean, &[3], 2),
            Err(Error::IndexOutOfRange { index: 3, bound: 2 })
        );
    }

    #[test]
    fn cotuples() {
        let a = bm(&[&[1]]);
        assert_eq!(KMatrix::cotuple(std::slice::from_ref(&a)).unwrap(), a);
        assert_eq!(
            KMatrix::cotuple(&[a.clone(), bm(&[&[0]])]).unwrap(),
            bm(&[&[1], &[0]])
        );
        assert!(matches!(
            KMatrix::cotuple(&[a, bm(&[&[0, 1]])]),
            Err(Error::ColsMismatch {
                expected: 1,
                found: 2
            })
        ));
        let x = KMatrix::identity(ChainQuantale::new(2), 1);
        let y = KMatrix::identity(ChainQuantale::new(5), 1);
        assert!(matches!(
            KMatrix::cotuple(&[x, y]),
            Err(Error::SpecMismatch { .. })
        ));
    }

    #[test]
    fn order() {
        let f = bm(&[&[1, 0], &[1, 1]]);
        assert!(f.leq(&f).unwrap());
        assert!(KMatrix::zeros(Boolean, 2, 2).leq(&f).unwrap());
        let t = TropicalMinPlus::<u64>::new();
        let inf = KMatrix::from_rows(t, 1, vec![vec![INF]]).unwrap();
        let three = KMatrix::from_rows(t, 1, vec![vec![3]]).unwrap();
        assert!(inf.leq(&three).unwrap());
        assert!(!three.leq(&inf).unwrap());
        assert!(matches!(
            f.leq(&bm(&[&[1]])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transposes() {
        let f = bm(&[&[1, 1]]);
        assert_eq!(f.transpose(), bm(&[&[1], &[1]]));
        assert_eq!(f.transpose().transpose(), f);
        assert_eq!(
            KMatrix::identity(Boolean, 3).transpose(),
            KMatrix::identity(Boolean, 3)
        );
    }

    #[test]
    fn adjunction_identity_is_tight() {
        let f = KMatrix::base_map(Boolean, &[0, 1], 2).unwrap();
        let r = f.check_adjunction().unwrap();
        assert!(r.all_passed());
        assert!(r.checks.iter().all(|c| c.note.as_deref() == Some("equal")));
    }

    #[test]
    fn adjunction_constant_map_is_strict() {
        // f: 2 → 1 constant; f_∘f = [[1,1],[1,1]] strictly above id_2
        let f = KMatrix::base_map(Boolean, &[0, 0], 1).unwrap();
        let unit = f.compose(&f.transpose()).unwrap();
        assert_eq!(unit, bm(&[&[1, 1], &[1, 1]]));
        let r = f.check_adjunction().unwrap();
        assert!(r.all_passed());
        assert_eq!(
            r.get("unit: id <= f_∘f").unwrap().note.as_deref(),
            Some("strict")
        );
        assert_eq!(
            r.get("counit: f∘f_ <= id").unwrap().note.as_deref(),
            Some("equal")
        );
    }

    #[test]
    fn adjunction_chain_swap() {
        let c = ChainQuantale::new(2);
        let f = KMatrix::base_map(c, &[1, 0], 2).unwrap();
        assert_eq!(f.compose(&f.transpose()).unwrap(), KMatrix::identity(c, 2));
        assert!(f.check_adjunction().unwrap().all_passed());
    }

    #[test]
    fn adjunction_rejects_non_base_map() {
        let f = bm(&[&[1, 1]]);
        assert!(matches!(f.check_adjunction(), Err(Error::NotABaseMap(_))));
        assert!(matches!(
            bm(&[&[0, 0]]).check_adjunction(),
            Err(Error::NotABaseMap(_))
        ));
    }

    #[test]
    fn boolean_stars() {
        let edge = bm(&[&[0, 1], &[0, 0]]);
        assert_eq!(edge.star().unwrap(), bm(&[&[1, 1], &[0, 1]]));
        assert_eq!(
            KMatrix::zeros(Boolean, 2, 2).star().unwrap(),
            KMatrix::identity(Boolean, 2)
        );
        let cycle = bm(&[&[0, 1], &[1, 0]]);
        assert_eq!(cycle.star().unwrap(), bm(&[&[1, 1], &[1, 1]]));
    }

    #[test]
    fn tropical_star_is_shortest_path() {
        let t = TropicalMinPlus::<u64>::new();
        let mut a = KMatrix::zeros(t, 3, 3);
        a.set(0, 1, 1);
        a.set(1, 2, 2);
        assert_eq!(*a.star().unwrap().get(0, 2), 3);
    }

    #[test]
    fn natural_star_saturates_cycles() {
        let s = NaturalSat::<u64>::new();
        // 0 → 1 (weight 1), 1 ↺ (weight 1), 1 → 2; 2 is reached through a cycle
        let mut a = KMatrix::zeros(s, 4, 4);
        a.set(0, 1, 1);
        a.set(1, 1, 1);
        a.set(1, 2, 1);
        a.set(3, 0, 2);
        let st = a.star().unwrap();
        assert_eq!(*st.get(0, 0), 1);
        assert_eq!(*st.get(0, 1), INF);
        assert_eq!(*st.get(0, 2), INF);
        assert_eq!(*st.get(3, 0), 2);
        assert_eq!(*st.get(2, 2), 1);
        // acyclic: exact path counts
        let mut b = KMatrix::zeros(s, 3, 3);
        b.set(0, 1, 2);
        b.set(1, 2, 3);
        b.set(0, 2, 1);
        assert_eq!(*b.star().unwrap().get(0, 2), 7);
    }

    #[test]
    fn natural_star_detects_even_length_cycles() {
        // 0 → 1, 1 ⇄ 2, 2 → 3: every 0→3 path has even length
        let s = NaturalSat::<u64>::new();
        let mut a = KMatrix::zeros(s, 4, 4);
        a.set(0, 1, 1);
        a.set(1, 2, 1);
        a.set(2, 1, 1);
        a.set(1, 3, 1);
        assert_eq!(*a.star().unwrap().get(0, 3), INF);
    }

    #[test]
    fn real_star_geometric_series() {
        let r = ExtNonnegReal::<f64>::new();
        let a = KMatrix::from_rows(r, 1, vec![vec![0.5]]).unwrap();
        assert!((a.star().unwrap().get(0, 0) - 2.0).abs() < 1e-9);
        let b = KMatrix::from_rows(r, 1, vec![vec![1.0]]).unwrap();
        assert_eq!(
            b.star_with(200),
            Err(Error::NoConvergence { iterations: 200 })
        );
    }

    #[test]
    fn star_requires_square() {
        assert!(matches!(
            bm(&[&[1, 0]]).star(),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
