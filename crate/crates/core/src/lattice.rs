//! Intersection lattices and divisor classes.
//!
//! A lattice is a free abelian group of finite rank with a symmetric,
//! nonsingular integer pairing.  Classes carry exact rational coordinates;
//! a class is *integral* when every coordinate is an integer.
//!
//! Coordinate convention: for the `blowup` and `chain` kinds a class is
//! written `(d; m_1, ..., m_n)` and denotes `d?H - sum m_i E_i` — the
//! stored coordinates are the degree followed by the *multiplicities*.
//! Because those Gram matrices are `diag(1, -1, ..., -1)`, the pairing of
//! stored coordinate vectors through the Gram matrix computes the correct
//! intersection number `d d' - sum m_i m_i'` directly.  For `abelian` and
//! `custom` lattices coordinates are ordinary basis coefficients.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{gcd_all, parse_rational, parse_repeated_list, rat_display};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, is_symmetric, leading_minors, IntMatrix};

/// Shape of a lattice, determining labels and coordinate conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    /// Plane blown up in `points` distinct points: rank `points + 1`,
    /// Gram `diag(1, -1, ..., -1)`, labels `H, E_1, ..., E_r`.
    Blowup { points: usize },
    /// Plane blown up in `points` chains of `depth` infinitely-near points,
    /// written in the orthogonal (total-transform) basis: rank
    /// `points * depth + 1`, Gram `diag(1, -1, ..., -1)`.
    Chain { points: usize, depth: usize },
    /// Rank-3 lattice of a product of two elliptic curves with basis
    /// `f1, f2, delta` (two fibers and a diagonal), pairwise pairing 1 and
    /// zero squares.
    Abelian,
    /// Arbitrary user-supplied symmetric nonsingular Gram matrix.
    Custom,
}

impl LatticeKind {
    /// Canonical text form, e.g. `blowup(10)`, `chain(6,3)`, `abelian`.
    pub fn as_text(&self) -> String {
        match self {
            LatticeKind::Blowup { points } => format!("blowup({points})"),
            LatticeKind::Chain { points, depth } => format!("chain({points},{depth})"),
            LatticeKind::Abelian => "abelian".into(),
            LatticeKind::Custom => "custom".into(),
        }
    }

    /// Parses the text form produced by [`LatticeKind::as_text`].
    pub fn parse(s: &str) -> Result<LatticeKind> {
        let s = s.trim();
        if s == "abelian" {
            return Ok(LatticeKind::Abelian);
        }
        if s == "custom" {
            return Ok(LatticeKind::Custom);
        }
        if let Some(inner) = s.strip_prefix("blowup(").and_then(|t| t.strip_suffix(')')) {
            let points: usize = inner
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad blowup count in {s:?}")))?;
            return Ok(LatticeKind::Blowup { points });
        }
        if let Some(inner) = s.strip_prefix("chain(").and_then(|t| t.strip_suffix(')')) {
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| Error::Malformed(format!("bad chain parameters in {s:?}")))?;
            let points: usize = a
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad chain point count in {s:?}")))?;
            let depth: usize = b
                .trim()
                .parse()
                .map_err(|_| Error::Malformed(format!("bad chain depth in {s:?}")))?;
            return Ok(LatticeKind::Chain { points, depth });
        }
        Err(Error::Malformed(format!("unknown lattice kind {s:?}")))
    }

    /// True when classes are written degree-first with multiplicities.
    pub fn degree_first(&self) -> bool {
        matches!(self, LatticeKind::Blowup { .. } | LatticeKind::Chain { .. })
    }
}

/// A finite-rank integral lattice with symmetric nonsingular pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    kind: LatticeKind,
    rank: usize,
    gram: IntMatrix,
    labels: Vec<String>,
    disc: BigInt,
}

impl IntersectionLattice {
    /// Lattice of the plane blown up in `points` distinct points.
    pub fn blowup(points: usize) -> Arc<Self> {
        let rank = points + 1;
        let mut labels = Vec::with_capacity(rank);
        labels.push("H".to_string());
        for i in 1..=points {
            labels.push(format!("E_{i}"));
        }
        Arc::new(Self {
            kind: LatticeKind::Blowup { points },
            rank,
            gram: hyperplane_diagonal_gram(rank),
            labels,
            disc: if points.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() },
        })
    }

    /// Lattice of the plane blown up in `points` chains of `depth`
    /// infinitely-near points each, in the orthogonal basis.
    pub fn chain(points: usize, depth: usize) -> Result<Arc<Self>> {
        if points == 0 || depth == 0 {
            return Err(Error::Parameter(
                "chain lattice needs at least one chain of positive depth".into(),
            ));
        }
        let rank = points * depth + 1;
        let mut labels = Vec::with_capacity(rank);
        labels.push("L".to_string());
        for i in 1..=points {
            for j in 1..=depth {
                labels.push(format!("E_{{{i},{j}}}"));
            }
        }
        let n = points * depth;
        Ok(Arc::new(Self {
            kind: LatticeKind::Chain { points, depth },
            rank,
            gram: hyperplane_diagonal_gram(rank),
            labels,
            disc: if n.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() },
        }))
    }

    /// Rank-3 lattice of a product of two elliptic curves without extra
    /// correspondences: basis `f1, f2, delta`, all squares 0, all pairwise
    /// pairings 1.  Discriminant 2.
    pub fn abelian() -> Arc<Self> {
        let gram: IntMatrix = vec![
            vec![BigInt::zero(), BigInt::one(), BigInt::one()],
            vec![BigInt::one(), BigInt::zero(), BigInt::one()],
            vec![BigInt::one(), BigInt::one(), BigInt::zero()],
        ];
        Arc::new(Self {
            kind: LatticeKind::Abelian,
            rank: 3,
            disc: bareiss_det(&gram),
            gram,
            labels: vec!["f1".into(), "f2".into(), "delta".into()],
        })
    }

    /// Lattice with an arbitrary symmetric nonsingular Gram matrix.
    pub fn custom(gram: IntMatrix, labels: Vec<String>) -> Result<Arc<Self>> {
        let rank = gram.len();
        if rank == 0 {
            return Err(Error::Parameter("custom lattice needs positive rank".into()));
        }
        if !is_symmetric(&gram) {
            return Err(Error::Parameter("Gram matrix must be square and symmetric".into()));
        }
        if labels.len() != rank {
            return Err(Error::Parameter(format!(
                "{} labels supplied for rank {rank}",
                labels.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(Error::Parameter(format!("duplicate label {l:?}")));
            }
        }
        let disc = bareiss_det(&gram);
        if disc.is_zero() {
            return Err(Error::Degenerate("Gram matrix is singular".into()));
        }
        Ok(Arc::new(Self {
            kind: LatticeKind::Custom,
            rank,
            gram,
            labels,
            disc,
        }))
    }

    /// Builds the lattice named by a kind descriptor (custom kinds need the
    /// explicit constructor because they carry their own Gram matrix).
    pub fn from_kind(kind: &LatticeKind) -> Result<Arc<Self>> {
        match kind {
            LatticeKind::Blowup { points } => Ok(Self::blowup(*points)),
            LatticeKind::Chain { points, depth } => Self::chain(*points, *depth),
            LatticeKind::Abelian => Ok(Self::abelian()),
            LatticeKind::Custom => Err(Error::Parameter(
                "custom lattices carry their own Gram matrix; use the explicit constructor".into(),
            )),
        }
    }

    pub fn kind(&self) -> &LatticeKind {
        &self.kind
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Determinant of the Gram matrix (nonzero by construction).
    pub fn discriminant(&self) -> &BigInt {
        &self.disc
    }

    /// Canonical class where the kind determines one: `(-3; -1, ..., -1)`
    /// for blowup and chain lattices, zero for the abelian lattice, absent
    /// for custom lattices.
    pub fn canonical_class(self: &Arc<Self>) -> Option<DivisorClass> {
        match self.kind {
            LatticeKind::Blowup { .. } | LatticeKind::Chain { .. } => {
                let mut coords = vec![BigRational::from_integer(BigInt::from(-3))];
                coords.extend(
                    std::iter::repeat_with(|| -BigRational::one()).take(self.rank - 1),
                );
                Some(DivisorClass {
                    lattice: Arc::clone(self),
                    coords,
                })
            }
            LatticeKind::Abelian => Some(DivisorClass::zero(self)),
            LatticeKind::Custom => None,
        }
    }
}

/// Gram matrix `diag(1, -1, ..., -1)` of the given rank.
fn hyperplane_diagonal_gram(rank: usize) -> IntMatrix {
    (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    if i != j {
                        BigInt::zero()
                    } else if i == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    }
                })
                .collect()
        })
        .collect()
}

/// True when the two handles denote the same lattice.
pub fn same_lattice(a: &Arc<IntersectionLattice>, b: &Arc<IntersectionLattice>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A divisor class: exact rational coordinates on a fixed lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    lattice: Arc<IntersectionLattice>,
    coords: Vec<BigRational>,
}

impl DivisorClass {
    /// Class with the given rational coordinates.
    pub fn new(lattice: &Arc<IntersectionLattice>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != lattice.rank() {
            return Err(Error::Parameter(format!(
                "{} coordinates supplied for rank {}",
                coords.len(),
                lattice.rank()
            )));
        }
        Ok(Self {
            lattice: Arc::clone(lattice),
            coords,
        })
    }

    /// Class with integer coordinates.
    pub fn integral(lattice: &Arc<IntersectionLattice>, coords: Vec<BigInt>) -> Result<Self> {
        Self::new(
            lattice,
            coords.into_iter().map(BigRational::from_integer).collect(),
        )
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(lattice: &Arc<IntersectionLattice>, coords: &[i64]) -> Result<Self> {
        Self::integral(lattice, coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The zero class.
    pub fn zero(lattice: &Arc<IntersectionLattice>) -> Self {
        Self {
            lattice: Arc::clone(lattice),
            coords: vec![BigRational::zero(); lattice.rank()],
        }
    }

    pub fn lattice(&self) -> &Arc<IntersectionLattice> {
        &self.lattice
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(BigRational::is_integer)
    }

    /// Integer coordinates, if the class is integral.
    pub fn integer_coords(&self) -> Option<Vec<BigInt>> {
        self.is_integral()
            .then(|| self.coords.iter().map(|c| c.to_integer()).collect())
    }

    /// True for integral nonzero classes whose coordinate gcd is 1.
    pub fn is_primitive(&self) -> bool {
        match self.integer_coords() {
            Some(ints) => gcd_all(ints.iter()).is_one(),
            None => false,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_lattice(other)?;
        Ok(Self {
            lattice: Arc::clone(&self.lattice),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_lattice(other)?;
        Ok(Self {
            lattice: Arc::clone(&self.lattice),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            lattice: Arc::clone(&self.lattice),
            coords: self.coords.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn scale_int(&self, factor: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(factor.clone()))
    }

    /// Intersection number with another class on the same lattice.
    pub fn intersect(&self, other: &Self) -> Result<BigRational> {
        self.check_same_lattice(other)?;
        let gram = self.lattice.gram();
        let mut acc = BigRational::zero();
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut row = BigRational::zero();
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() || gram[i][j].is_zero() {
                    continue;
                }
                row += b * BigRational::from_integer(gram[i][j].clone());
            }
            acc += a * row;
        }
        Ok(acc)
    }

    /// Self-intersection number.
    pub fn self_intersection(&self) -> BigRational {
        self.intersect(self).expect("same lattice")
    }

    /// Splits an integral nonzero class as `g * F` with `F` primitive.
    pub fn primitive_part(&self) -> Result<(BigInt, DivisorClass)> {
        let ints = self.integer_coords().ok_or_else(|| {
            Error::Parameter("primitive part is defined for integral classes".into())
        })?;
        let g = gcd_all(ints.iter());
        if g.is_zero() {
            return Err(Error::Degenerate(
                "primitive part is undefined for the zero class".into(),
            ));
        }
        let coords = ints
            .into_iter()
            .map(|c| BigRational::from_integer(c / &g))
            .collect();
        Ok((
            g,
            DivisorClass {
                lattice: Arc::clone(&self.lattice),
                coords,
            },
        ))
    }

    /// Pairings of this class with each basis class, in label order.
    ///
    /// For degree-first lattices the stored coordinates already absorb the
    /// sign convention, so this is simply the Gram matrix applied to the
    /// coordinate vector.
    pub fn basis_pairings(&self) -> Vec<BigRational> {
        let gram = self.lattice.gram();
        (0..self.lattice.rank())
            .map(|j| {
                let mut acc = BigRational::zero();
                for (i, a) in self.coords.iter().enumerate() {
                    if a.is_zero() || gram[i][j].is_zero() {
                        continue;
                    }
                    acc += a * BigRational::from_integer(gram[i][j].clone());
                }
                acc
            })
            .collect()
    }

    fn check_same_lattice(&self, other: &Self) -> Result<()> {
        if same_lattice(&self.lattice, &other.lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch(format!(
                "classes live on {} and {}",
                self.lattice.kind().as_text(),
                other.lattice.kind().as_text()
            )))
        }
    }
}

impl fmt::Display for DivisorClass {
    /// Degree-first lattices render as `(d;m_1,...)` with runs of equal
    /// multiplicities compressed to `v^count`; other lattices render the
    /// plain coordinate tuple.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lattice.kind().degree_first() && !self.coords.is_empty() {
            let degree = rat_display(&self.coords[0]);
            let tail = compress_run_lengths(&self.coords[1..]);
            write!(f, "({degree};{tail})")
        } else {
            let parts: Vec<String> = self.coords.iter().map(rat_display).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

fn compress_run_lengths(coords: &[BigRational]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < coords.len() {
        let mut j = i + 1;
        while j < coords.len() && coords[j] == coords[i] {
            j += 1;
        }
        let value = rat_display(&coords[i]);
        if j - i >= 2 {
            parts.push(format!("{value}^{}", j - i));
        } else {
            parts.push(value);
        }
        i = j;
    }
    parts.join(",")
}

/// Parses the textual class forms produced by `Display`: `(d;m,...)` or a
/// plain coordinate tuple, with optional `value^count` run compression and
/// optional outer parentheses.
pub fn parse_class(lattice: &Arc<IntersectionLattice>, text: &str) -> Result<DivisorClass> {
    let mut s = text.trim();
    if let Some(stripped) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        s = stripped;
    }
    let mut coords = Vec::new();
    match s.split_once(';') {
        Some((head, tail)) => {
            coords.push(parse_rational(head)?);
            if !tail.trim().is_empty() {
                coords.extend(parse_repeated_list(tail)?);
            }
        }
        None => coords.extend(parse_repeated_list(s)?),
    }
    if coords.len() != lattice.rank() {
        return Err(Error::Parameter(format!(
            "class {text:?} has {} coordinates but the lattice has rank {}",
            coords.len(),
            lattice.rank()
        )));
    }
    DivisorClass::new(lattice, coords)
}

/// Pairwise intersection matrix of integral classes on a shared lattice.
pub fn gram_of(classes: &[DivisorClass]) -> Result<IntMatrix> {
    if let Some(first) = classes.first() {
        for c in classes {
            if !same_lattice(first.lattice(), c.lattice()) {
                return Err(Error::LatticeMismatch(
                    "Gram matrix requires classes on one lattice".into(),
                ));
            }
            if !c.is_integral() {
                return Err(Error::Parameter(
                    "Gram matrix is defined for integral classes".into(),
                ));
            }
        }
    }
    let n = classes.len();
    let mut out = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = classes[i].intersect(&classes[j])?;
            debug_assert!(v.is_integer());
            out[i][j] = v.to_integer();
            out[j][i] = out[i][j].clone();
        }
    }
    Ok(out)
}

/// Outcome of a definiteness test, with the minors retained as the
/// certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefinitenessReport {
    /// Whether the matrix is negative definite.
    pub negative_definite: bool,
    /// Leading principal minors `M_1, ..., M_n`.
    pub minors: Vec<BigInt>,
    /// Index (1-based size) of the first minor with the wrong sign, if any.
    pub first_failure: Option<usize>,
}

/// Tests negative definiteness of a symmetric integer matrix via the signs
/// of its leading principal minors: the k-th minor must have sign (-1)^k.
/// The empty matrix is vacuously negative definite.
pub fn is_negative_definite(m: &IntMatrix) -> Result<DefinitenessReport> {
    if !is_symmetric(m) {
        return Err(Error::Parameter(
            "definiteness test requires a symmetric matrix".into(),
        ));
    }
    let minors = leading_minors(m);
    let mut first_failure = None;
    for (idx, minor) in minors.iter().enumerate() {
        let k = idx + 1;
        let ok = if k % 2 == 1 {
            minor.is_negative()
        } else {
            minor.is_positive()
        };
        if !ok {
            first_failure = Some(k);
            break;
        }
    }
    Ok(DefinitenessReport {
        negative_definite: first_failure.is_none(),
        minors,
        first_failure,
    })
}

/// Witness that the gcd of all pairings of a primitive class divides the
/// lattice discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalGcdWitness {
    /// gcd of `F . B` over all basis classes `B` (equivalently over all
    /// integral classes, by linearity).
    pub gcd: BigInt,
    /// The basis pairings themselves.
    pub pairings: Vec<BigInt>,
    /// Lattice discriminant, which the gcd divides.
    pub discriminant: BigInt,
}

/// Computes the gcd of all intersection numbers `F . C` over integral `C`
/// and certifies that it divides the lattice discriminant.
///
/// The divisibility holds for every primitive `F` on every nonsingular
/// lattice (multiply `gram * f` by the adjugate: `det(gram) * f` is an
/// integer combination of the pairings, and `gcd(f) = 1`).  A failure is
/// therefore reported as a hard invariant violation, not a user error.
pub fn universal_intersection_gcd(f: &DivisorClass) -> Result<UniversalGcdWitness> {
    if !f.is_primitive() {
        return Err(Error::Parameter(
            "universal pairing gcd is defined for primitive classes".into(),
        ));
    }
    let pairings: Vec<BigInt> = f
        .basis_pairings()
        .into_iter()
        .map(|r| {
            debug_assert!(r.is_integer());
            r.to_integer()
        })
        .collect();
    let gcd = gcd_all(pairings.iter());
    let discriminant = f.lattice().discriminant().clone();
    if gcd.is_zero() || !(&discriminant % &gcd).is_zero() {
        return Err(Error::LemmaViolation(format!(
            "pairing gcd {gcd} does not divide discriminant {discriminant}"
        )));
    }
    Ok(UniversalGcdWitness {
        gcd,
        pairings,
        discriminant,
    })
}

/// Summary of a randomized divisibility sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub trials: usize,
    pub max_rank: usize,
    pub seed: u64,
    /// Number of trials where the divisibility failed (must be 0).
    pub violations: usize,
    /// Number of trials where the pairing gcd exceeded 1, as evidence the
    /// sweep exercises nontrivial cases.
    pub nontrivial_gcds: usize,
}

/// Runs `trials` random checks of the discriminant divisibility: a random
/// symmetric nonsingular Gram matrix of rank up to `max_rank`, a random
/// primitive class, then [`universal_intersection_gcd`].  Identical seeds
/// yield identical reports.
#[allow(clippy::needless_range_loop)] // in-place row operations
pub fn discriminant_lemma_sweep(trials: usize, max_rank: usize, seed: u64) -> Result<SweepReport> {
    if max_rank == 0 {
        return Err(Error::Parameter("sweep needs max_rank >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut nontrivial_gcds = 0usize;
    for _ in 0..trials {
        let rank = rng.random_range(1..=max_rank);
        let lattice = loop {
            let mut gram = vec![vec![BigInt::zero(); rank]; rank];
            for i in 0..rank {
                for j in 0..=i {
                    let v = BigInt::from(rng.random_range(-9..=9i64));
                    gram[i][j] = v.clone();
                    gram[j][i] = v;
                }
            }
            let labels = (0..rank).map(|i| format!("b{i}")).collect();
            match IntersectionLattice::custom(gram, labels) {
                Ok(l) => break l,
                Err(_) => continue, // singular draw; resample
            }
        };
        let coords = loop {
            let c: Vec<BigInt> = (0..rank)
                .map(|_| BigInt::from(rng.random_range(-30..=30i64)))
                .collect();
            if c.iter().any(|v| !v.is_zero()) {
                break c;
            }
        };
        let class = DivisorClass::integral(&lattice, coords)?;
        let (_, primitive) = class.primitive_part()?;
        match universal_intersection_gcd(&primitive) {
            Ok(witness) => {
                if witness.gcd > BigInt::one() {
                    nontrivial_gcds += 1;
                }
            }
            Err(Error::LemmaViolation(_)) => violations += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SweepReport {
        trials,
        max_rank,
        seed,
        violations,
        nontrivial_gcds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int_rat;

    #[test]
    fn lattice_shapes() {
        let b = IntersectionLattice::blowup(10);
        assert_eq!(b.rank(), 11);
        assert_eq!(b.labels()[0], "H");
        assert_eq!(b.labels()[10], "E_10");
        assert_eq!(*b.discriminant(), BigInt::from(1));
        assert_eq!(b.gram()[0][0], BigInt::one());
        assert_eq!(b.gram()[3][3], BigInt::from(-1));
        assert_eq!(b.gram()[0][3], BigInt::zero());

        let c = IntersectionLattice::chain(6, 3).unwrap();
        assert_eq!(c.rank(), 19);
        assert_eq!(c.labels()[1], "E_{1,1}");
        assert_eq!(c.labels()[18], "E_{6,3}");
        assert_eq!(*c.discriminant(), BigInt::from(1));

        let a = IntersectionLattice::abelian();
        assert_eq!(a.rank(), 3);
        assert_eq!(*a.discriminant(), BigInt::from(2));
        assert!(IntersectionLattice::chain(0, 3).is_err());
    }

    #[test]
    fn custom_lattice_validation() {
        let asym = vec![
            vec![BigInt::zero(), BigInt::one()],
            vec![BigInt::from(2), BigInt::zero()],
        ];
        assert!(IntersectionLattice::custom(asym, vec!["a".into(), "b".into()]).is_err());
        let singular = vec![
            vec![BigInt::one(), BigInt::one()],
            vec![BigInt::one(), BigInt::one()],
        ];
        assert!(IntersectionLattice::custom(singular, vec!["a".into(), "b".into()]).is_err());
        let dup = vec![
            vec![BigInt::one(), BigInt::zero()],
            vec![BigInt::zero(), BigInt::one()],
        ];
        assert!(IntersectionLattice::custom(dup, vec!["a".into(), "a".into()]).is_err());
    }

    #[test]
    fn intersection_convention() {
        let b = IntersectionLattice::blowup(10);
        // (3; 1, ..., 1) squares to 9 - 10 = -1.
        let f = DivisorClass::from_i64(&b, &[3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(f.self_intersection(), int_rat(-1));
        // Pairings with the basis classes: H gives 3, each E_i gives -1...
        let pairings = f.basis_pairings();
        assert_eq!(pairings[0], int_rat(3));
        assert!(pairings[1..].iter().all(|p| *p == int_rat(-1)));
        // ...but intersection with the exceptional *class* E_1 = (0;-1,0,...)
        // is the multiplicity 1.
        let e1 = DivisorClass::from_i64(&b, &[0, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(f.intersect(&e1).unwrap(), int_rat(1));
        assert_eq!(e1.self_intersection(), int_rat(-1));

        let k = b.canonical_class().unwrap();
        assert_eq!(k.self_intersection(), int_rat(-1)); // 9 - 10
        assert_eq!(f.intersect(&k).unwrap(), int_rat(1)); // -9 + 10
        // Adjunction-style cross-check: F.(F - K) = -2, twice the virtual
        // dimension of a degree-3 class through ten simple points.
        let f_minus_k = f.sub(&k).unwrap();
        assert_eq!(f.intersect(&f_minus_k).unwrap(), int_rat(-2));

        let a = IntersectionLattice::abelian();
        let d = DivisorClass::from_i64(&a, &[1, 1, 0]).unwrap();
        assert_eq!(d.self_intersection(), int_rat(2));
        assert!(a.canonical_class().unwrap().is_zero());
    }

    #[test]
    fn mismatched_lattices_are_rejected() {
        let b10 = IntersectionLattice::blowup(10);
        let b9 = IntersectionLattice::blowup(9);
        let x = DivisorClass::zero(&b10);
        let y = DivisorClass::zero(&b9);
        assert!(matches!(x.intersect(&y), Err(Error::LatticeMismatch(_))));
        // Equal lattices built separately still pair fine.
        let b10_again = IntersectionLattice::blowup(10);
        let z = DivisorClass::zero(&b10_again);
        assert!(x.intersect(&z).is_ok());
    }

    #[test]
    fn primitive_parts() {
        let b = IntersectionLattice::blowup(10);
        let d = DivisorClass::from_i64(&b, &[6, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2]).unwrap();
        let (g, f) = d.primitive_part().unwrap();
        assert_eq!(g, BigInt::from(2));
        assert_eq!(
            f,
            DivisorClass::from_i64(&b, &[3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1]).unwrap()
        );
        assert!(f.is_primitive());
        assert!(!d.is_primitive());
        assert!(DivisorClass::zero(&b).primitive_part().is_err());
        let half = DivisorClass::new(&b, vec![crate::arith::ratio(1, 2); 11]).unwrap();
        assert!(half.primitive_part().is_err());
    }

    #[test]
    fn display_and_parse() {
        let b = IntersectionLattice::blowup(10);
        let d = DivisorClass::from_i64(&b, &[6, 2, 2, 2, 2, 2, 2, 2, 2, 2, 2]).unwrap();
        assert_eq!(d.to_string(), "(6;2^10)");
        let mixed = DivisorClass::from_i64(&b, &[57, 18, 18, 18, 18, 18, 18, 18, 18, 18, -4])
            .unwrap();
        assert_eq!(mixed.to_string(), "(57;18^9,-4)");
        for text in ["(6;2^10)", "6;2,2,2,2,2,2,2,2,2,2", " ( 6 ; 2^9 , 2 ) "] {
            assert_eq!(parse_class(&b, text).unwrap(), d, "{text}");
        }
        assert_eq!(parse_class(&b, &mixed.to_string()).unwrap(), mixed);

        let a = IntersectionLattice::abelian();
        let v = DivisorClass::from_i64(&a, &[2, 3, -1]).unwrap();
        assert_eq!(v.to_string(), "(2,3,-1)");
        assert_eq!(parse_class(&a, "2,3,-1").unwrap(), v);

        // Rational coordinates survive the round trip.
        let p = DivisorClass::new(
            &b,
            vec![
                crate::arith::ratio(52, 7),
                crate::arith::ratio(1, 7),
                int_rat(1),
                int_rat(1),
                int_rat(1),
                int_rat(1),
                int_rat(1),
                int_rat(1),
                int_rat(1),
                int_rat(1),
                int_rat(1),
            ],
        )
        .unwrap();
        assert_eq!(p.to_string(), "(52/7;1/7,1^9)");
        assert_eq!(parse_class(&b, &p.to_string()).unwrap(), p);

        assert!(parse_class(&b, "(6;2^9)").is_err()); // wrong length
        assert!(parse_class(&b, "(6;2^0,2^10)").is_err());
        assert!(parse_class(&b, "").is_err());
    }

    #[test]
    fn definiteness_reports() {
        // Two disjoint (-2)-chains of length 2: negative definite.
        let m: IntMatrix = vec![
            vec![(-2).into(), 1.into(), 0.into(), 0.into()],
            vec![1.into(), (-2).into(), 0.into(), 0.into()],
            vec![0.into(), 0.into(), (-2).into(), 1.into()],
            vec![0.into(), 0.into(), 1.into(), (-2).into()],
        ];
        let report = is_negative_definite(&m).unwrap();
        assert!(report.negative_definite);
        assert_eq!(
            report.minors,
            vec![
                BigInt::from(-2),
                BigInt::from(3),
                BigInt::from(-6),
                BigInt::from(9)
            ]
        );

        // A (-2)-chain of length 2 with pairing 2 is only semidefinite.
        let m: IntMatrix = vec![
            vec![(-2).into(), 2.into()],
            vec![2.into(), (-2).into()],
        ];
        let report = is_negative_definite(&m).unwrap();
        assert!(!report.negative_definite);
        assert_eq!(report.first_failure, Some(2));

        let empty: IntMatrix = vec![];
        assert!(is_negative_definite(&empty).unwrap().negative_definite);

        let asym: IntMatrix = vec![
            vec![(-1).into(), 1.into()],
            vec![0.into(), (-1).into()],
        ];
        assert!(is_negative_definite(&asym).is_err());
    }

    #[test]
    fn universal_gcd_examples() {
        let a = IntersectionLattice::abelian();
        // f1 + f2 pairs to (1, 1, 2): gcd 1.
        let d = DivisorClass::from_i64(&a, &[1, 1, 0]).unwrap();
        let w = universal_intersection_gcd(&d).unwrap();
        assert_eq!(w.gcd, BigInt::one());
        // delta - f1 - f2? Try the class (1, 1, -1): pairings (0, 0, 2)... gcd 2.
        let d = DivisorClass::from_i64(&a, &[1, 1, -1]).unwrap();
        let w = universal_intersection_gcd(&d).unwrap();
        assert_eq!(w.pairings, vec![BigInt::zero(), BigInt::zero(), BigInt::from(2)]);
        assert_eq!(w.gcd, BigInt::from(2));
        assert_eq!(w.discriminant, BigInt::from(2));

        // Unimodular lattice: the gcd is always 1.
        let b = IntersectionLattice::blowup(10);
        let f = DivisorClass::from_i64(&b, &[19, 6, 6, 6, 6, 6, 6, 6, 6, 6, 6]).unwrap();
        let w = universal_intersection_gcd(&f).unwrap();
        assert_eq!(w.gcd, BigInt::one());

        let not_primitive = DivisorClass::from_i64(&a, &[2, 2, 0]).unwrap();
        assert!(universal_intersection_gcd(&not_primitive).is_err());
    }

    #[test]
    fn sweep_is_clean_and_deterministic() {
        let r1 = discriminant_lemma_sweep(300, 6, 42).unwrap();
        let r2 = discriminant_lemma_sweep(300, 6, 42).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.violations, 0);
        assert!(r1.nontrivial_gcds > 0, "sweep should hit nontrivial gcds");
        let r3 = discriminant_lemma_sweep(300, 6, 43).unwrap();
        assert_eq!(r3.violations, 0);
    }
}
