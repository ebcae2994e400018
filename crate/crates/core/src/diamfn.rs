//! Diameter functions on the nonempty subsets of a finite point set.
//!
//! A map `τ` from nonempty subsets to nonnegative scalars is the diameter
//! function of some ultrametric exactly when
//!
//! * `τ(A) = 0` iff `A` is a singleton, and
//! * `τ(A ∪ B) ≤ τ(A ∪ C) ∨ τ(C ∪ B)` for all `A`, `B`, `C`.
//!
//! The ultrametric is then unique: `ρ(x, y) = τ({x, y})`. The same two
//! conditions make subset balls `B_r(A) = {C : τ(A ∪ C) ≤ r}` behave like
//! ultrametric balls: any member recenters the ball, and two balls are either
//! disjoint or nested.
//!
//! Tables are dense (indexed by subset mask) up to [`DENSE_CAP`] points. The
//! lazy form keeps only the space and evaluates diameters on demand.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DiamMismatch, Error, Result};
use crate::matrix::DistanceMatrix;
use crate::scalar::Scalar;
use crate::space::{certify_ultrametric, UltrametricSpace};
use crate::subset::{SubsetId, MAX_POINTS};

/// Largest point count with a materialized table.
pub const DENSE_CAP: usize = 20;
/// Largest point count for which the triple condition is scanned exhaustively
/// by default.
pub const EXHAUSTIVE_AXIOM_CAP: usize = 6;
/// Largest point count accepted by [`check_ball_dichotomy`].
pub const BALL_CAP: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Table {
    /// `values[mask - 1]`.
    Dense(Vec<Scalar>),
    Lazy(UltrametricSpace),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterFunction {
    n: usize,
    table: Table,
}

/// Diameters of all nonempty subsets, indexed by `mask - 1`.
fn all_diameters(s: &UltrametricSpace) -> Vec<Scalar> {
    let n = s.n();
    let count = (1usize << n) - 1;
    let mut values = Vec::with_capacity(count);
    for mask in 1..=count {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let v = if rest == 0 {
            Scalar::zero()
        } else {
            let mut best = &values[rest - 1];
            let mut r = rest;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                r &= r - 1;
                if s.d(low, j) > best {
                    best = s.d(low, j);
                }
            }
            best.clone()
        };
        values.push(v);
    }
    values
}

/// The diameter function of `s`, as a dense table.
pub fn tau_from_space(s: &UltrametricSpace) -> Result<DiameterFunction> {
    DiameterFunction::from_space(s)
}

impl DiameterFunction {
    pub fn from_space(s: &UltrametricSpace) -> Result<Self> {
        let n = s.n();
        if n > DENSE_CAP {
            return Err(Error::CapExceeded { what: "dense diameter table", n, cap: DENSE_CAP });
        }
        Ok(DiameterFunction { n, table: Table::Dense(all_diameters(s)) })
    }

    /// Evaluates diameters on demand from `s`.
    pub fn lazy(s: &UltrametricSpace) -> Result<Self> {
        let n = s.n();
        if n > MAX_POINTS {
            return Err(Error::CapExceeded { what: "subset masks", n, cap: MAX_POINTS });
        }
        Ok(DiameterFunction { n, table: Table::Lazy(s.clone()) })
    }

    /// A table given as `values[mask - 1]` for every nonempty mask.
    pub fn from_values(n: usize, values: Vec<Scalar>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("diameter function on zero points".into()));
        }
        if n > DENSE_CAP {
            return Err(Error::CapExceeded { what: "dense diameter table", n, cap: DENSE_CAP });
        }
        let expected = (1usize << n) - 1;
        if values.len() != expected {
            return Err(Error::Shape(format!("{} values for {expected} subsets", values.len())));
        }
        Ok(DiameterFunction { n, table: Table::Dense(values) })
    }

    /// A table from `(subset, value)` pairs; every nonempty subset must occur
    /// exactly once.
    pub fn from_entries(n: usize, entries: Vec<(SubsetId, Scalar)>) -> Result<Self> {
        if n == 0 || n > DENSE_CAP {
            return Err(Error::CapExceeded { what: "dense diameter table", n, cap: DENSE_CAP });
        }
        let count = (1usize << n) - 1;
        let mut slots: Vec<Option<Scalar>> = vec![None; count];
        for (subset, value) in entries {
            let idx = subset.mask() as usize - 1;
            if idx >= count {
                return Err(Error::Shape(format!("subset {subset} outside {n} points")));
            }
            if slots[idx].replace(value).is_some() {
                return Err(Error::Shape(format!("subset {subset} listed twice")));
            }
        }
        let values = slots
            .into_iter()
            .enumerate()
            .map(|(idx, v)| {
                let subset = SubsetId::from_mask(idx as u64 + 1).expect("nonzero");
                v.ok_or_else(|| Error::Shape(format!("subset {subset} missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        DiameterFunction::from_values(n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.table, Table::Dense(_))
    }

    pub fn value(&self, subset: SubsetId) -> Scalar {
        assert!(
            self.n == MAX_POINTS || subset.mask() >> self.n == 0,
            "subset {subset} outside {} points",
            self.n
        );
        match &self.table {
            Table::Dense(values) => values[subset.mask() as usize - 1].clone(),
            Table::Lazy(s) => s.diam_of(subset),
        }
    }

    /// All values in mask order, materializing a lazy table.
    fn values(&self) -> Result<Vec<Scalar>> {
        match &self.table {
            Table::Dense(values) => Ok(values.clone()),
            Table::Lazy(s) => {
                if self.n > DENSE_CAP {
                    return Err(Error::CapExceeded { what: "dense diameter table", n: self.n, cap: DENSE_CAP });
                }
                Ok(all_diameters(s))
            }
        }
    }

    /// Order-preserving integer codes for the values, `codes[mask - 1]`.
    /// The axioms only compare values, so scans run on the codes.
    fn ranks(&self) -> Result<(Vec<u32>, Vec<Scalar>)> {
        let values = self.values()?;
        let mut distinct = values.clone();
        distinct.sort();
        distinct.dedup();
        let codes = values
            .iter()
            .map(|v| distinct.binary_search(v).expect("value present") as u32)
            .collect();
        Ok((codes, distinct))
    }

    pub fn to_json(&self) -> Result<String> {
        let values = self.values()?;
        let doc = DiamFnDoc {
            n: self.n,
            entries: values
                .into_iter()
                .enumerate()
                .map(|(idx, value)| DiamFnEntry {
                    subset: SubsetId::from_mask(idx as u64 + 1).expect("nonzero").indices(),
                    value,
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc).expect("diameter function serializes"))
    }

    pub fn from_json(raw: &str) -> Result<Self> {
        let doc: DiamFnDoc = serde_json::from_str(raw).map_err(|e| Error::Parse {
            line: Some(e.line()),
            column: Some(e.column()),
            message: e.to_string(),
        })?;
        if doc.n == 0 || doc.n > DENSE_CAP {
            return Err(Error::CapExceeded { what: "dense diameter table", n: doc.n, cap: DENSE_CAP });
        }
        let entries = doc
            .entries
            .into_iter()
            .map(|e| Ok((SubsetId::from_indices(&e.subset, doc.n)?, e.value)))
            .collect::<Result<Vec<_>>>()?;
        DiameterFunction::from_entries(doc.n, entries)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiamFnDoc {
    n: usize,
    entries: Vec<DiamFnEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiamFnEntry {
    subset: Vec<usize>,
    value: Scalar,
}

/// How the triple condition is scanned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Budget for [`check_axioms_with`].
#[derive(Debug, Clone, Copy)]
pub struct AxiomScan {
    /// Scan every triple when `n` is at most this.
    pub exhaustive_cap: usize,
    /// Random triples drawn otherwise.
    pub samples: u64,
    pub seed: u64,
}

impl Default for AxiomScan {
    fn default() -> Self {
        AxiomScan { exhaustive_cap: EXHAUSTIVE_AXIOM_CAP, samples: 1_000_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum AxiomWitness {
    /// `τ(subset) = 0` disagrees with `subset` being a singleton.
    ZeroOnSingletons { subset: SubsetId, value: Scalar },
    /// `τ(a ∪ b) > τ(a ∪ c) ∨ τ(c ∪ b)`.
    Triple {
        a: SubsetId,
        b: SubsetId,
        c: SubsetId,
        tau_ab: Scalar,
        tau_ac: Scalar,
        tau_cb: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub n: usize,
    /// Zero exactly on singletons.
    pub i1_ok: bool,
    /// Triple condition on every scanned triple.
    pub i2_ok: bool,
    pub scan: ScanMode,
    pub triples_checked: u64,
    /// First failure: the singleton condition takes precedence, then the
    /// smallest `(a, b, c)` by mask among failing triples.
    pub witness: Option<AxiomWitness>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.i1_ok && self.i2_ok
    }
}

impl std::fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.witness {
            None => write!(f, "all axioms hold"),
            Some(AxiomWitness::ZeroOnSingletons { subset, value }) => {
                write!(f, "tau({subset}) = {value} breaks zero-exactly-on-singletons")
            }
            Some(AxiomWitness::Triple { a, b, c, tau_ab, tau_ac, tau_cb }) => write!(
                f,
                "A = {a}, B = {b}, C = {c}: tau(A∪B) = {tau_ab} > tau(A∪C) ∨ tau(C∪B) = {tau_ac} ∨ {tau_cb}"
            ),
        }
    }
}

/// [`check_axioms_with`] under the default budget.
pub fn check_axioms(t: &DiameterFunction) -> Result<AxiomReport> {
    check_axioms_with(t, &AxiomScan::default())
}

pub fn check_axioms_with(t: &DiameterFunction, scan: &AxiomScan) -> Result<AxiomReport> {
    let n = t.n;
    let (codes, distinct) = t.ranks()?;
    let zero_code = distinct.first().filter(|v| v.is_zero()).map(|_| 0u32);
    let value_of = |mask: usize| distinct[codes[mask - 1] as usize].clone();
    let subset = |mask: usize| SubsetId::from_mask(mask as u64).expect("nonzero");

    let mut zero_witness = None;
    for mask in 1..=codes.len() {
        let is_zero = Some(codes[mask - 1]) == zero_code;
        if is_zero != (mask.count_ones() == 1) {
            zero_witness = Some(AxiomWitness::ZeroOnSingletons { subset: subset(mask), value: value_of(mask) });
            break;
        }
    }

    let full = codes.len();
    let code = |mask: usize| codes[mask - 1];
    let fails = |a: usize, b: usize, c: usize| code(a | b) > code(a | c).max(code(c | b));
    let mut triple: Option<(usize, usize, usize)> = None;
    let (mode, checked) = if n <= scan.exhaustive_cap {
        'scan: for a in 1..=full {
            for b in 1..=full {
                let ab = code(a | b);
                for c in 1..=full {
                    if ab > code(a | c).max(code(c | b)) {
                        triple = Some((a, b, c));
                        break 'scan;
                    }
                }
            }
        }
        (ScanMode::Exhaustive, (full as u64).pow(3))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(scan.seed);
        for _ in 0..scan.samples {
            let a = rng.random_range(1..=full);
            let b = rng.random_range(1..=full);
            let c = rng.random_range(1..=full);
            if fails(a, b, c) && triple.is_none_or(|t| (a, b, c) < t) {
                triple = Some((a, b, c));
            }
        }
        (ScanMode::Sampled { samples: scan.samples, seed: scan.seed }, scan.samples)
    };

    let triple_witness = triple.map(|(a, b, c)| AxiomWitness::Triple {
        a: subset(a),
        b: subset(b),
        c: subset(c),
        tau_ab: value_of(a | b),
        tau_ac: value_of(a | c),
        tau_cb: value_of(c | b),
    });
    Ok(AxiomReport {
        n,
        i1_ok: zero_witness.is_none(),
        i2_ok: triple_witness.is_none(),
        scan: mode,
        triples_checked: checked,
        witness: zero_witness.or(triple_witness),
    })
}

/// Recovers the unique ultrametric with `ρ(x, y) = τ({x, y})` and confirms
/// that `τ` is its diameter function on every subset.
pub fn synthesize_ultrametric(t: &DiameterFunction) -> Result<UltrametricSpace> {
    if let Table::Lazy(s) = &t.table {
        return Ok(s.clone());
    }
    let report = check_axioms(t)?;
    if !report.ok() {
        return Err(Error::AxiomViolation(Box::new(report)));
    }
    let m = DistanceMatrix::from_fn(t.n, |x, y| t.value(SubsetId::pair(x, y)))?;
    let space = match certify_ultrametric(m) {
        Ok(s) => s,
        Err(v) => {
            // Only reachable after a sampled scan missed this triple.
            let (a, b, c) = (SubsetId::singleton(v.x), SubsetId::singleton(v.z), SubsetId::singleton(v.y));
            let witness = AxiomWitness::Triple { a, b, c, tau_ab: v.d_xz, tau_ac: v.d_xy, tau_cb: v.d_yz };
            return Err(Error::AxiomViolation(Box::new(AxiomReport {
                i2_ok: false,
                witness: Some(witness),
                ..report
            })));
        }
    };
    let diameters = all_diameters(&space);
    for (idx, diam) in diameters.into_iter().enumerate() {
        let subset = SubsetId::from_mask(idx as u64 + 1).expect("nonzero");
        let tau = t.value(subset);
        if tau != diam {
            return Err(Error::DiamMismatch(Box::new(DiamMismatch { subset, tau, diam })));
        }
    }
    Ok(space)
}

/// `B_r(A) = {C : τ(A ∪ C) ≤ r}`; members in increasing mask order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetBall {
    pub center: SubsetId,
    pub radius: Scalar,
    pub members: Vec<SubsetId>,
}

impl SubsetBall {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: SubsetId) -> bool {
        self.members.binary_search(&c).is_ok()
    }
}

pub fn ball(t: &DiameterFunction, center: SubsetId, radius: &Scalar) -> Result<SubsetBall> {
    let n = t.n;
    if n > DENSE_CAP {
        return Err(Error::CapExceeded { what: "subset balls", n, cap: DENSE_CAP });
    }
    if center.mask() >> n != 0 {
        return Err(Error::IndexOutOfRange { index: 63 - center.mask().leading_zeros() as usize, n });
    }
    let members = SubsetId::all(n).filter(|&c| &t.value(center | c) <= radius).collect();
    Ok(SubsetBall { center, radius: radius.clone(), members })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BallCounterexample {
    /// Emptiness of the ball disagrees with `radius < τ(center)`.
    Emptiness { center: SubsetId, radius: Scalar },
    /// Two balls with `radius1 ≥ radius2` that meet without the second being
    /// contained in the first.
    NotNested { center1: SubsetId, radius1: Scalar, center2: SubsetId, radius2: Scalar },
    /// `member ∈ B_r(center)` but `B_r(member) ≠ B_r(center)`.
    Recentering { center: SubsetId, member: SubsetId, radius: Scalar },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BallReport {
    pub n: usize,
    pub radii: Vec<Scalar>,
    pub nonempty_balls: usize,
    pub pairs_checked: u64,
    pub counterexample: Option<BallCounterexample>,
}

impl BallReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Enumerates every ball with center in F(X) and radius in the value set
/// of `τ` (plus one radius below the smallest positive value) and checks
/// emptiness, the disjoint-or-nested dichotomy and recentering, in that
/// order. The first failure found is reported.
pub fn check_ball_dichotomy(t: &DiameterFunction) -> Result<BallReport> {
    let n = t.n;
    if n > BALL_CAP {
        return Err(Error::CapExceeded { what: "ball dichotomy check", n, cap: BALL_CAP });
    }
    let values = t.values()?;
    let mut radii = values.clone();
    radii.sort();
    radii.dedup();
    if let Some(min_pos) = radii.iter().find(|v| !v.is_zero()).cloned() {
        radii.push(min_pos.halved());
        radii.sort();
        radii.dedup();
    }
    let count = values.len();
    // members[c][r]: bit (mask - 1) set for every C in B_r(c).
    let mut members = vec![vec![0u64; radii.len()]; count];
    for a in 1..=count {
        for c in 1..=count {
            let v = &values[(a | c) - 1];
            for (ri, r) in radii.iter().enumerate() {
                if v <= r {
                    members[a - 1][ri] |= 1 << (c - 1);
                }
            }
        }
    }
    let subset = |mask: usize| SubsetId::from_mask(mask as u64).expect("nonzero");
    let mut report = BallReport { n, radii: radii.clone(), nonempty_balls: 0, pairs_checked: 0, counterexample: None };

    for a in 1..=count {
        for (ri, r) in radii.iter().enumerate() {
            let empty = members[a - 1][ri] == 0;
            if empty != (r < &values[a - 1]) {
                report.counterexample = Some(BallCounterexample::Emptiness { center: subset(a), radius: r.clone() });
                return Ok(report);
            }
            if !empty {
                report.nonempty_balls += 1;
            }
        }
    }

    let balls: Vec<(usize, usize, u64)> = (1..=count)
        .flat_map(|a| (0..radii.len()).map(move |ri| (a, ri)))
        .map(|(a, ri)| (a, ri, members[a - 1][ri]))
        .filter(|&(_, _, m)| m != 0)
        .collect();
    for &(a1, r1, m1) in &balls {
        for &(a2, r2, m2) in &balls {
            if r1 < r2 {
                continue;
            }
            report.pairs_checked += 1;
            let disjoint = m1 & m2 == 0;
            let nested = m2 & !m1 == 0;
            if !(disjoint || nested) {
                report.counterexample = Some(BallCounterexample::NotNested {
                    center1: subset(a1),
                    radius1: radii[r1].clone(),
                    center2: subset(a2),
                    radius2: radii[r2].clone(),
                });
                return Ok(report);
            }
        }
    }

    for &(a, ri, m) in &balls {
        let mut rest = m;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize + 1;
            rest &= rest - 1;
            if members[c - 1][ri] != m {
                report.counterexample = Some(BallCounterexample::Recentering {
                    center: subset(a),
                    member: subset(c),
                    radius: radii[ri].clone(),
                });
                return Ok(report);
            }
        }
    }
    Ok(report)
}
