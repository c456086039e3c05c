//! Fat-point interpolation over finite fields.
//!
//! A fat-point scheme assigns a multiplicity to each of finitely many
//! points of the projective plane over GF(q).  The interpolation matrix of
//! degree `b` encodes the linear conditions that plane curves of degree `b`
//! vanish to the prescribed order at each point; its rank computes the
//! exact dimension of the linear system.  A full-rank matrix certifies that
//! the system is empty, and because vanishing conditions specialize, a
//! full-rank instance over a finite field certifies emptiness for points in
//! general position in characteristic zero as well.
//!
//! Vanishing to order `m` is expressed through Hasse derivatives: in the
//! affine chart where the point's leading coordinate is 1, the row for the
//! derivative pair `(a1, a2)` applied to the monomial `u^i v^j` has entry
//! `C(i, a1) C(j, a2) u^(i-a1) v^(j-a2)`.  Hasse derivatives (binomial
//! coefficients in place of falling factorials) keep the conditions
//! meaningful in small characteristic.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::arith::binomial_big;
use crate::error::{Error, Result};
use crate::gf::FiniteField;
use crate::shgh::PlaneClass;

/// A point of PG(2, q), stored normalized: the first nonzero coordinate
/// equals 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint(pub [u64; 3]);

impl ProjPoint {
    /// Normalize homogeneous coordinates over the given field.
    pub fn new(field: &FiniteField, coords: [u64; 3]) -> Result<Self> {
        if coords.iter().any(|&c| c >= field.order()) {
            return Err(Error::Parameter(format!(
                "coordinate out of range for GF({})",
                field.order()
            )));
        }
        let lead = coords
            .iter()
            .position(|&c| c != 0)
            .ok_or_else(|| Error::Parameter("(0:0:0) is not a projective point".into()))?;
        let scale = field.inv(coords[lead])?;
        let mut out = [0u64; 3];
        for (o, &c) in out.iter_mut().zip(&coords) {
            *o = field.mul(scale, c);
        }
        Ok(Self(out))
    }

    /// Index of the leading coordinate (the normalized 1).
    pub fn chart(&self) -> usize {
        self.0.iter().position(|&c| c != 0).expect("normalized point")
    }
}

/// The full point and line sets of PG(2, q) with their incidence relation.
#[derive(Clone, Debug)]
pub struct ProjectivePlane {
    pub field: FiniteField,
    /// All points, normalized, in ascending lexicographic coordinate order.
    pub points: Vec<ProjPoint>,
    /// All lines as normalized dual coordinates, same ordering.
    pub lines: Vec<ProjPoint>,
}

impl ProjectivePlane {
    pub fn incident(&self, point: &ProjPoint, line: &ProjPoint) -> bool {
        let f = &self.field;
        let mut acc = 0u64;
        for (&x, &a) in point.0.iter().zip(&line.0) {
            acc = f.add(acc, f.mul(x, a));
        }
        acc == 0
    }

    /// The unique line through two distinct points.
    pub fn line_through(&self, p: &ProjPoint, q: &ProjPoint) -> Result<ProjPoint> {
        if p == q {
            return Err(Error::Parameter("points must be distinct".into()));
        }
        let f = &self.field;
        let cross = [
            f.sub(f.mul(p.0[1], q.0[2]), f.mul(p.0[2], q.0[1])),
            f.sub(f.mul(p.0[2], q.0[0]), f.mul(p.0[0], q.0[2])),
            f.sub(f.mul(p.0[0], q.0[1]), f.mul(p.0[1], q.0[0])),
        ];
        ProjPoint::new(f, cross)
    }
}

/// Enumerate PG(2, q) for a prime power q.
pub fn pg2_enumerate(q: u64) -> Result<ProjectivePlane> {
    let field = FiniteField::new(q)?;
    let mut points = Vec::with_capacity((q * q + q + 1) as usize);
    points.push(ProjPoint([0, 0, 1]));
    for z in 0..q {
        points.push(ProjPoint([0, 1, z]));
    }
    for y in 0..q {
        for z in 0..q {
            points.push(ProjPoint([1, y, z]));
        }
    }
    points.sort();
    let lines = points.clone();
    Ok(ProjectivePlane { field, points, lines })
}

/// A finite scheme of distinct fat points in PG(2, q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatPointScheme {
    pub field: FiniteField,
    points: Vec<ProjPoint>,
    multiplicities: Vec<u64>,
}

impl FatPointScheme {
    pub fn new(field: FiniteField, raw_points: Vec<[u64; 3]>, multiplicities: Vec<u64>) -> Result<Self> {
        if raw_points.is_empty() {
            return Err(Error::Parameter("scheme must contain at least one point".into()));
        }
        if raw_points.len() != multiplicities.len() {
            return Err(Error::Parameter(format!(
                "{} points but {} multiplicities",
                raw_points.len(),
                multiplicities.len()
            )));
        }
        if let Some(m) = multiplicities.iter().find(|&&m| m == 0) {
            return Err(Error::Parameter(format!("multiplicities must be >= 1, got {m}")));
        }
        let points: Vec<ProjPoint> = raw_points
            .into_iter()
            .map(|c| ProjPoint::new(&field, c))
            .collect::<Result<_>>()?;
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::Parameter(format!(
                    "duplicate point ({}:{}:{})",
                    p.0[0], p.0[1], p.0[2]
                )));
            }
        }
        Ok(Self { field, points, multiplicities })
    }

    /// Uniform multiplicity at every point.
    pub fn uniform(field: FiniteField, raw_points: Vec<[u64; 3]>, m: u64) -> Result<Self> {
        let n = raw_points.len();
        Self::new(field, raw_points, vec![m; n])
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of linear conditions the scheme imposes: sum of C(m_i + 1, 2).
    pub fn condition_count(&self) -> usize {
        self.multiplicities
            .iter()
            .map(|&m| (m * (m + 1) / 2) as usize)
            .sum()
    }

    /// Reinterpret the scheme over a larger field of the same
    /// characteristic.  Coordinates must lie in the prime subfield, whose
    /// element codes agree across the two fields.
    pub fn embed_prime_subfield(&self, larger: &FiniteField) -> Result<Self> {
        if larger.characteristic() != self.field.characteristic() {
            return Err(Error::Parameter(format!(
                "characteristic mismatch: {} vs {}",
                self.field.characteristic(),
                larger.characteristic()
            )));
        }
        let p = self.field.characteristic();
        for pt in &self.points {
            if pt.0.iter().any(|&c| c >= p) {
                return Err(Error::Parameter(
                    "coordinates outside the prime subfield cannot be embedded".into(),
                ));
            }
        }
        Ok(Self {
            field: larger.clone(),
            points: self.points.clone(),
            multiplicities: self.multiplicities.clone(),
        })
    }
}

/// Exponent triples (i, j, k) with i + j + k = b, in a fixed order
/// (descending in i, then descending in j).
pub fn monomials(b: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::new();
    for i in (0..=b).rev() {
        for j in (0..=b - i).rev() {
            out.push([i, j, b - i - j]);
        }
    }
    out
}

/// A dense matrix over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfMatrix {
    pub field: FiniteField,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u64>,
}

impl GfMatrix {
    pub fn zero(field: FiniteField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.field.order());
        self.data[r * self.cols + c] = v;
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0;
                for (c, &x) in v.iter().enumerate() {
                    acc = f.add(acc, f.mul(self.get(r, c), x));
                }
                acc
            })
            .collect()
    }

    /// Rank by Gaussian elimination, certified two ways: the pivot
    /// submatrix is invertible (rank is at least r) and an explicit
    /// nullspace basis of size cols - r is returned (rank is at most r).
    pub fn rank_certificate(&self) -> RankCertificate {
        let f = self.field.clone();
        let mut m = self.clone();
        let mut pivot_rows: Vec<usize> = Vec::new();
        let mut pivot_cols: Vec<usize> = Vec::new();
        let mut row_origin: Vec<usize> = (0..self.rows).collect();
        let mut r = 0usize;
        for c in 0..m.cols {
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if p != r {
                for cc in 0..m.cols {
                    let (a, b) = (m.get(r, cc), m.get(p, cc));
                    m.set(r, cc, b);
                    m.set(p, cc, a);
                }
                row_origin.swap(r, p);
            }
            let inv = f.inv(m.get(r, c)).expect("pivot nonzero");
            for cc in c..m.cols {
                let v = f.mul(inv, m.get(r, cc));
                m.set(r, cc, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c) == 0 {
                    continue;
                }
                let factor = m.get(i, c);
                for cc in c..m.cols {
                    let v = f.sub(m.get(i, cc), f.mul(factor, m.get(r, cc)));
                    m.set(i, cc, v);
                }
            }
            pivot_rows.push(row_origin[r]);
            pivot_cols.push(c);
            r += 1;
            if r == m.rows {
                break;
            }
        }
        // Nullspace basis from the reduced form: one vector per free column.
        let mut nullspace = Vec::new();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; m.cols];
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = Some(ri);
            }
            v
        };
        for free in 0..m.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![0u64; m.cols];
            vec[free] = 1;
            for (pc, slot) in pivot_set.iter().enumerate() {
                if let Some(ri) = slot {
                    vec[pc] = f.neg(m.get(*ri, free));
                }
            }
            nullspace.push(vec);
        }
        RankCertificate { rank: r, pivot_rows, pivot_cols, nullspace }
    }

    pub fn rank(&self) -> usize {
        self.rank_certificate().rank
    }

    /// Determinant of a square matrix by elimination.
    pub fn det(&self) -> Result<u64> {
        if self.rows != self.cols {
            return Err(Error::Parameter("determinant needs a square matrix".into()));
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = 1u64;
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| m.get(i, c) != 0) else {
                return Ok(0);
            };
            if p != c {
                for cc in 0..m.cols {
                    let (a, b) = (m.get(c, cc), m.get(p, cc));
                    m.set(c, cc, b);
                    m.set(p, cc, a);
                }
                det = f.neg(det);
            }
            det = f.mul(det, m.get(c, c));
            let inv = f.inv(m.get(c, c))?;
            for i in c + 1..m.rows {
                if m.get(i, c) == 0 {
                    continue;
                }
                let factor = f.mul(inv, m.get(i, c));
                for cc in c..m.cols {
                    let v = f.sub(m.get(i, cc), f.mul(factor, m.get(c, cc)));
                    m.set(i, cc, v);
                }
            }
        }
        Ok(det)
    }

    /// The square submatrix on the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GfMatrix {
        let mut out = GfMatrix::zero(self.field.clone(), rows.len(), cols.len());
        for (ri, &r) in rows.iter().enumerate() {
            for (ci, &c) in cols.iter().enumerate() {
                out.set(ri, ci, self.get(r, c));
            }
        }
        out
    }
}

/// A certified rank computation: the pivot minor is invertible and the
/// nullspace basis has the complementary size.
#[derive(Clone, Debug)]
pub struct RankCertificate {
    pub rank: usize,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
    pub nullspace: Vec<Vec<u64>>,
}

impl RankCertificate {
    /// Re-check the certificate against the matrix it was computed from.
    pub fn verify(&self, m: &GfMatrix) -> Result<()> {
        if self.pivot_rows.len() != self.rank || self.pivot_cols.len() != self.rank {
            return Err(Error::CertificationFailed("pivot count differs from rank".into()));
        }
        if self.nullspace.len() != m.cols - self.rank {
            return Err(Error::CertificationFailed("nullspace size differs from corank".into()));
        }
        if self.rank > 0 {
            let minor = m.submatrix(&self.pivot_rows, &self.pivot_cols);
            if minor.det()? == 0 {
                return Err(Error::CertificationFailed("pivot minor is singular".into()));
            }
        }
        for v in &self.nullspace {
            if m.apply(v).iter().any(|&x| x != 0) {
                return Err(Error::CertificationFailed("claimed nullspace vector is not in the kernel".into()));
            }
        }
        Ok(())
    }
}

/// The interpolation matrix of degree-`b` curves against a fat-point
/// scheme: one row per Hasse-derivative condition, one column per degree-`b`
/// monomial.
pub fn interpolation_matrix(b: u64, scheme: &FatPointScheme) -> Result<GfMatrix> {
    if b < 1 {
        return Err(Error::Parameter("degree must be >= 1".into()));
    }
    let f = scheme.field.clone();
    let mons = monomials(b);
    let rows = scheme.condition_count();
    let mut m = GfMatrix::zero(f.clone(), rows, mons.len());
    let mut row = 0usize;
    for (pt, &mult) in scheme.points().iter().zip(scheme.multiplicities()) {
        let chart = pt.chart();
        let (u, v) = match chart {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        for a1 in 0..mult {
            for a2 in 0..mult - a1 {
                for (col, e) in mons.iter().enumerate() {
                    let (eu, ev) = (e[u], e[v]);
                    if eu < a1 || ev < a2 {
                        continue;
                    }
                    let coeff = f.from_bigint(&(binomial_big(&BigInt::from(eu), a1)
                        * binomial_big(&BigInt::from(ev), a2)));
                    let val = f.mul(
                        coeff,
                        f.mul(f.pow(pt.0[u], eu - a1), f.pow(pt.0[v], ev - a2)),
                    );
                    m.set(row, col, val);
                }
                row += 1;
            }
        }
    }
    debug_assert_eq!(row, rows);
    Ok(m)
}

/// Exact dimension of the space of degree-`b` forms satisfying all the
/// scheme's vanishing conditions: columns minus certified rank.
pub fn linear_system_dim(b: u64, scheme: &FatPointScheme) -> Result<usize> {
    let m = interpolation_matrix(b, scheme)?;
    let cert = m.rank_certificate();
    cert.verify(&m)?;
    Ok(m.cols - cert.rank)
}

/// Evidence that an interpolation matrix has full column rank, i.e. that
/// the corresponding linear system is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpolationWitness {
    pub field_order: u64,
    pub degree: u64,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
}

/// Certify that no curve of the class's degree passes through the scheme
/// with the class's multiplicities.  Succeeds exactly when the linear
/// system dimension is zero; a positive dimension is reported as a
/// certification failure, not silently.
pub fn certify_non_effective(class: &PlaneClass, scheme: &FatPointScheme) -> Result<InterpolationWitness> {
    let b = class
        .degree()
        .to_u64()
        .filter(|&b| b >= 1)
        .ok_or_else(|| Error::Parameter("class degree must be a positive machine integer".into()))?;
    let mut class_mults: Vec<BigInt> = class.mults().to_vec();
    let mut scheme_mults: Vec<BigInt> =
        scheme.multiplicities().iter().map(|&m| BigInt::from(m)).collect();
    class_mults.sort();
    scheme_mults.sort();
    if class_mults != scheme_mults {
        return Err(Error::Parameter(
            "scheme multiplicities do not match the class multiplicities".into(),
        ));
    }
    let m = interpolation_matrix(b, scheme)?;
    let cert = m.rank_certificate();
    cert.verify(&m)?;
    let dim = m.cols - cert.rank;
    if dim != 0 {
        return Err(Error::CertificationFailed(format!(
            "degree-{b} system is nonempty: dimension {dim} over GF({})",
            scheme.field.order()
        )));
    }
    Ok(InterpolationWitness {
        field_order: scheme.field.order(),
        degree: b,
        rows: m.rows,
        cols: m.cols,
        rank: cert.rank,
    })
}
