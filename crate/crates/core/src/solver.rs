//! Minimal embedding search: structural lower bound, derived-series
//! restricted ansatz, quadratic constraint generation, zero-preferring
//! ladder search with exact linear propagation, and Gröbner-based
//! infeasibility certificates via minor saturation.

use std::collections::BTreeMap;
use std::sync::Arc;

use itertools::Itertools;

use crate::algebra::{rank as vector_rank, AlgebraError, LieAlgebra, Vector};
use crate::gauss::GaussianRational;
use crate::poly::{
    solve_linear_subsystem, GbConfig, Ideal, Polynomial, Triviality, Var,
};
use crate::scalar::{ParamRing, Scalar};
use crate::triangular::{
    derived_ideal_basis_h, derived_series_dims_h, tri_axpy, tri_commutator,
    tri_to_vector, TriIndex, TriVector, TriangularAlgebra,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error("law has formal parameters; substitute concrete values first")]
    ParametricLaw,
    #[error("representation has {got} images but the algebra has dimension {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("ansatz incompatible with target size {k}")]
    IncompatibleAnsatz { k: usize },
    #[error("scalar error: {0}")]
    Scalar(#[from] crate::scalar::ScalarError),
}

impl From<AlgebraError> for SolverError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::NotSolvable => SolverError::NotSolvable,
            other => panic!("unexpected algebra error: {other}"),
        }
    }
}

/// Solver knobs. The Gröbner caps for certificates inside the k-loop
/// default tighter than the standalone engine caps so that a hopeless
/// certificate attempt degrades to `Inconclusive` quickly instead of
/// stalling the search.
#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub max_k: Option<usize>,
    pub search_budget: u64,
    pub gb: GbConfig,
    pub cert_gb: GbConfig,
    pub max_minors: usize,
    pub direct_gb_vars: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_k: None,
            search_budget: 500_000,
            gb: GbConfig::default(),
            cert_gb: GbConfig { max_pairs: 4_000, max_degree: 10 },
            max_minors: 512,
            direct_gb_vars: 24,
        }
    }
}

/// Step 1: the smallest `k >= k0` whose triangular derived-series
/// dimensions dominate those of `a` termwise, where `k0 = d-1` for
/// series length `d <= 4` and `k0 = d` otherwise.
pub fn lower_bound_k(a: &LieAlgebra) -> Result<usize, SolverError> {
    let dims = a.derived_series_dims()?;
    let d = dims.len();
    let mut k = if d <= 4 { d.saturating_sub(1).max(1) } else { d };
    loop {
        let hdims = derived_series_dims_h(k);
        let ok = dims
            .iter()
            .enumerate()
            .all(|(m, &dg)| dg <= hdims.get(m).copied().unwrap_or(0));
        if ok {
            return Ok(k);
        }
        k += 1;
    }
}

/// The unknown linear combinations, one block of slots per source
/// basis vector, restricted by derived-series depth.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub k: usize,
    /// allowed triangular slots per source basis vector
    pub supports: Vec<Vec<TriIndex>>,
    /// variable ids parallel to `supports`
    pub vars: Vec<Vec<Var>>,
    /// reverse table indexed by variable id: (source index, slot)
    pub var_slots: Vec<(usize, TriIndex)>,
    /// derived-series depth of each source basis vector
    pub depths: Vec<usize>,
}

impl Ansatz {
    pub fn num_vars(&self) -> usize {
        self.var_slots.len()
    }
}

/// Step 2: allocate variables for each basis vector over the basis of
/// the deepest derived ideal of the target that contains its image.
pub fn build_ansatz(a: &LieAlgebra, k: usize) -> Result<Ansatz, SolverError> {
    let series = a.derived_series()?;
    let n = a.dim();
    let mut depths = Vec::with_capacity(n);
    for h in 1..=n {
        let basis_vec = Vector::basis(n, h);
        let depth = series
            .iter()
            .take_while(|term| term.contains(&basis_vec))
            .count();
        debug_assert!(depth >= 1);
        depths.push(depth);
    }
    let mut supports = Vec::with_capacity(n);
    let mut vars: Vec<Vec<Var>> = Vec::with_capacity(n);
    let mut var_slots = Vec::new();
    for (h0, &depth) in depths.iter().enumerate() {
        let support = derived_ideal_basis_h(k, depth);
        if support.is_empty() {
            return Err(SolverError::IncompatibleAnsatz { k });
        }
        let mut ids = Vec::with_capacity(support.len());
        for &slot in &support {
            ids.push(var_slots.len() as Var);
            var_slots.push((h0, slot));
        }
        supports.push(support);
        vars.push(ids);
    }
    Ok(Ansatz { k, supports, vars, var_slots, depths })
}

/// The quadratic constraint system of Step 3 plus the per-vector
/// nonvanishing requirements (at least one slot of each source vector
/// must be nonzero; full independence is enforced at extraction time).
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub equations: Vec<Polynomial>,
    /// parallel metadata: source pair and target slot of each equation
    pub eq_meta: Vec<((usize, usize), TriIndex)>,
    /// per source vector, the variables of its slots
    pub nondegeneracy: Vec<Vec<Var>>,
}

/// Step 3: compare `[E_i, E_j]` with `sum_h c^h_{ij} E_h` coordinate by
/// coordinate over the flat triangular basis. Requires a numeric law.
pub fn generate_constraints(
    a: &LieAlgebra,
    ansatz: &Ansatz,
) -> Result<ConstraintSystem, SolverError> {
    if a.is_parametric() {
        return Err(SolverError::ParametricLaw);
    }
    let n = a.dim();
    let mut equations = Vec::new();
    let mut eq_meta = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            // commutator of the two generic forms, per target slot
            let mut lhs: BTreeMap<TriIndex, Polynomial> = BTreeMap::new();
            for (&sa, &va) in ansatz.supports[i].iter().zip(&ansatz.vars[i]) {
                for (&sb, &vb) in ansatz.supports[j].iter().zip(&ansatz.vars[j]) {
                    let prod = Polynomial::var(va).mul(&Polynomial::var(vb));
                    if sa.j == sb.i {
                        let slot = lhs
                            .entry(TriIndex::new(sa.i, sb.j))
                            .or_insert_with(Polynomial::zero);
                        *slot = slot.add(&prod);
                    }
                    if sb.j == sa.i {
                        let slot = lhs
                            .entry(TriIndex::new(sb.i, sa.j))
                            .or_insert_with(Polynomial::zero);
                        *slot = slot.sub(&prod);
                    }
                }
            }
            // right-hand side: the image of [e_{i+1}, e_{j+1}]
            let bracket = a.bracket_basis(i + 1, j + 1);
            for (h0, coeff) in bracket.0.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let c = coeff
                    .constant_value()
                    .ok_or(SolverError::ParametricLaw)?;
                for (&slot, &var) in ansatz.supports[h0].iter().zip(&ansatz.vars[h0]) {
                    let term = Polynomial::var(var).scale(&c);
                    let entry = lhs.entry(slot).or_insert_with(Polynomial::zero);
                    *entry = entry.sub(&term);
                }
            }
            for (slot, poly) in lhs {
                if !poly.is_zero() {
                    equations.push(poly);
                    eq_meta.push(((i + 1, j + 1), slot));
                }
            }
        }
    }
    Ok(ConstraintSystem {
        equations,
        eq_meta,
        nondegeneracy: ansatz.vars.clone(),
    })
}

/// A minimal faithful-candidate: one triangular element per source
/// basis vector. Validity is established by `verify_representation`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub k: usize,
    pub images: Vec<TriVector>,
    pub ring: Arc<ParamRing>,
}

impl Representation {
    pub fn numeric(k: usize, images: Vec<TriVector>) -> Representation {
        Representation { k, images, ring: ParamRing::empty() }
    }
}

#[derive(Clone, Debug)]
pub enum Defect {
    RankDeficient { rank: usize, expected: usize },
    BracketMismatch { i: usize, j: usize, got: TriVector, expected: TriVector },
}

impl std::fmt::Display for Defect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Defect::RankDeficient { rank, expected } => {
                write!(f, "rank deficiency: images span dimension {rank} < {expected}")
            }
            Defect::BracketMismatch { i, j, .. } => {
                write!(f, "bracket mismatch on pair (e{i}, e{j})")
            }
        }
    }
}

use crate::scalar::ring_union;

/// Check linear independence of the images and exact bracket
/// preservation for every pair; parametric scalars are handled
/// symbolically (generic point). An empty defect list means valid.
pub fn verify_representation(
    a: &LieAlgebra,
    rep: &Representation,
) -> Result<Vec<Defect>, SolverError> {
    let n = a.dim();
    if rep.images.len() != n {
        return Err(SolverError::SizeMismatch { expected: n, got: rep.images.len() });
    }
    let ring = ring_union(a.ring(), &rep.ring);
    let move_tv = |tv: &TriVector| -> Result<TriVector, SolverError> {
        tv.iter()
            .map(|(idx, c)| Ok((*idx, c.into_ring(&ring)?)))
            .collect()
    };
    let images: Vec<TriVector> = rep
        .images
        .iter()
        .map(|tv| move_tv(tv))
        .collect::<Result<_, _>>()?;

    let mut defects = Vec::new();
    let model = TriangularAlgebra::new(rep.k);
    let rows: Vec<Vector> = images.iter().map(|tv| tri_to_vector(model, tv)).collect();
    let rank = vector_rank(&rows, model.dim());
    if rank < n {
        defects.push(Defect::RankDeficient { rank, expected: n });
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            let got = tri_commutator(&images[i - 1], &images[j - 1]);
            let mut expected: TriVector = BTreeMap::new();
            for (h0, coeff) in a.bracket_basis(i, j).0.iter().enumerate() {
                if !coeff.is_zero() {
                    let c = coeff.into_ring(&ring)?;
                    tri_axpy(&mut expected, &c, &images[h0]);
                }
            }
            let mut diff = got.clone();
            tri_axpy(&mut diff, &Scalar::int(-1), &expected);
            if !diff.is_empty() {
                defects.push(Defect::BracketMismatch { i, j, got, expected });
            }
        }
    }
    Ok(defects)
}

/// Result of the ladder search. `NotFound` means the finite candidate
/// ladder was exhausted; it is not an infeasibility proof.
#[derive(Clone, Debug)]
pub enum SearchResult {
    Found(Representation),
    NotFound,
    Inconclusive(String),
}

fn ladder() -> Vec<GaussianRational> {
    vec![
        GaussianRational::zero(),
        GaussianRational::from_int(1),
        GaussianRational::from_int(-1),
        GaussianRational::i(),
        -GaussianRational::i(),
        GaussianRational::from_int(2),
        GaussianRational::from_ratio(1, 2),
        GaussianRational::from_int(-2),
        GaussianRational::from_ratio(-1, 2),
    ]
}

struct SearchCtx<'a> {
    ansatz: &'a Ansatz,
    order: Vec<Var>,
    candidates: Vec<GaussianRational>,
    budget: u64,
    nodes: u64,
    model: TriangularAlgebra,
}

enum SearchStep {
    Found(BTreeMap<Var, GaussianRational>),
    Exhausted,
    BudgetHit,
}

/// Exact propagation carried incrementally: equations arrive with all
/// assigned variables already substituted away; repeatedly solve the
/// currently-linear part and substitute whatever it forces.
fn propagate(
    mut eqs: Vec<Polynomial>,
    assignment: &mut BTreeMap<Var, GaussianRational>,
) -> Result<Vec<Polynomial>, crate::poly::Inconsistent> {
    loop {
        eqs.retain(|p| !p.is_zero());
        for p in &eqs {
            if p.total_degree() == 0 {
                return Err(crate::poly::Inconsistent);
            }
        }
        let linear: Vec<Polynomial> = eqs
            .iter()
            .filter(|p| p.total_degree() == 1)
            .cloned()
            .collect();
        if linear.is_empty() {
            return Ok(eqs);
        }
        let forced = solve_linear_subsystem(&linear, &BTreeMap::new())?;
        if forced.is_empty() {
            return Ok(eqs);
        }
        eqs = eqs.iter().map(|p| p.substitute_map(&forced)).collect();
        assignment.extend(forced);
    }
}

impl<'a> SearchCtx<'a> {
    /// Returns true if the partial assignment survives the pruning
    /// rules: no fully-assigned zero vector, fully-assigned images
    /// linearly independent.
    fn prune_ok(&self, assignment: &BTreeMap<Var, GaussianRational>) -> bool {
        let mut complete_rows: Vec<Vec<GaussianRational>> = Vec::new();
        let dim = self.model.dim();
        for (h0, vars) in self.ansatz.vars.iter().enumerate() {
            if !vars.iter().all(|v| assignment.contains_key(v)) {
                continue;
            }
            let mut row = vec![GaussianRational::zero(); dim];
            let mut all_zero = true;
            for (&slot, &v) in self.ansatz.supports[h0].iter().zip(vars) {
                let val = &assignment[&v];
                if !val.is_zero() {
                    all_zero = false;
                }
                row[self.model.flat(slot) - 1] = val.clone();
            }
            if all_zero {
                return false; // nondegeneracy: vector collapsed to zero
            }
            complete_rows.push(row);
        }
        gauss_rank(&complete_rows) == complete_rows.len()
    }

    fn dfs(
        &mut self,
        eqs: Vec<Polynomial>,
        mut assignment: BTreeMap<Var, GaussianRational>,
    ) -> SearchStep {
        self.nodes += 1;
        if self.nodes > self.budget {
            return SearchStep::BudgetHit;
        }
        let eqs = match propagate(eqs, &mut assignment) {
            Err(_) => return SearchStep::Exhausted,
            Ok(eqs) => eqs,
        };
        if !self.prune_ok(&assignment) {
            return SearchStep::Exhausted;
        }
        let next = self
            .order
            .iter()
            .copied()
            .find(|v| !assignment.contains_key(v));
        let var = match next {
            Some(v) => v,
            None => {
                // all variables assigned: propagation has already
                // rejected any nonvanishing residue, so the system is
                // satisfied iff nothing nonconstant remains
                debug_assert!(eqs.is_empty());
                if eqs.is_empty() {
                    return SearchStep::Found(assignment);
                }
                return SearchStep::Exhausted;
            }
        };
        for cand in self.candidates.clone() {
            let child_eqs: Vec<Polynomial> =
                eqs.iter().map(|p| p.substitute(var, &cand)).collect();
            let mut child_assignment = assignment.clone();
            child_assignment.insert(var, cand);
            match self.dfs(child_eqs, child_assignment) {
                SearchStep::Exhausted => continue,
                other => return other,
            }
        }
        SearchStep::Exhausted
    }
}

fn gauss_rank(rows: &[Vec<GaussianRational>]) -> usize {
    let mut mat: Vec<Vec<GaussianRational>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .cloned()
        .collect();
    let width = mat.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let pivot = (rank..mat.len()).find(|&r| !mat[r][col].is_zero());
        if let Some(p) = pivot {
            mat.swap(rank, p);
            let inv = mat[rank][col].inv();
            for c in &mut mat[rank] {
                *c = &*c * &inv;
            }
            for r in 0..mat.len() {
                if r != rank && !mat[r][col].is_zero() {
                    let f = mat[r][col].clone();
                    for c in 0..width {
                        let delta = &mat[rank][c] * &f;
                        mat[r][c] = &mat[r][c] - &delta;
                    }
                }
            }
            rank += 1;
            if rank == mat.len() {
                break;
            }
        }
    }
    rank
}

/// Step 4 (search half): backtracking over the candidate ladder
/// {0, 1, -1, i, -i, 2, 1/2, -2, -1/2}, zeros first, deepest source
/// vectors first, with exact linear propagation after every assignment
/// and pruning on inconsistency, collapsed vectors and dependent
/// images. A full assignment is accepted only if all equations vanish
/// and the images have full rank.
pub fn search_solution(
    cs: &ConstraintSystem,
    ansatz: &Ansatz,
    config: &SolveConfig,
) -> SearchResult {
    // quick feasibility gate on small systems: a trivial equation ideal
    // has no solutions at all
    if ansatz.num_vars() <= config.direct_gb_vars {
        let mut ideal = Ideal::new(cs.equations.clone());
        if ideal.is_trivial(&config.cert_gb) == Triviality::Yes {
            return SearchResult::NotFound;
        }
    }
    // variable order: deepest vectors first, then declaration order
    let mut vector_order: Vec<usize> = (0..ansatz.vars.len()).collect();
    vector_order.sort_by_key(|&h0| (std::cmp::Reverse(ansatz.depths[h0]), h0));
    let order: Vec<Var> = vector_order
        .iter()
        .flat_map(|&h0| ansatz.vars[h0].iter().copied())
        .collect();
    let mut ctx = SearchCtx {
        ansatz,
        order,
        candidates: ladder(),
        budget: config.search_budget,
        nodes: 0,
        model: TriangularAlgebra::new(ansatz.k),
    };
    match ctx.dfs(cs.equations.clone(), BTreeMap::new()) {
        SearchStep::Found(assignment) => {
            let images: Vec<TriVector> = ansatz
                .supports
                .iter()
                .zip(&ansatz.vars)
                .map(|(slots, vars)| {
                    slots
                        .iter()
                        .zip(vars)
                        .filter_map(|(&slot, v)| {
                            let val = assignment[v].clone();
                            (!val.is_zero()).then(|| (slot, Scalar::rat(val)))
                        })
                        .collect()
                })
                .collect();
            SearchResult::Found(Representation::numeric(ansatz.k, images))
        }
        SearchStep::Exhausted => SearchResult::NotFound,
        SearchStep::BudgetHit => SearchResult::Inconclusive(format!(
            "search budget of {} nodes exhausted",
            config.search_budget
        )),
    }
}

/// One minor's triviality witness: the saturated system's reduced
/// Gröbner basis, replayable via `reduce(1, basis) == 0`.
#[derive(Clone, Debug)]
pub struct MinorCertificate {
    pub minor_rows: Vec<TriIndex>,
    pub minor: Polynomial,
    pub basis: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub enum CertOutcome {
    /// every maximal minor's saturation is trivial (or no nonzero
    /// minor exists: structural rank deficiency / pigeonhole)
    Infeasible(Vec<MinorCertificate>),
    SolutionsMayExist,
    Inconclusive(String),
}

fn minor_determinant(matrix: &[Vec<Polynomial>]) -> Polynomial {
    let n = matrix.len();
    if n == 0 {
        return Polynomial::one();
    }
    if n == 1 {
        return matrix[0][0].clone();
    }
    // cofactor expansion along the first column
    let mut det = Polynomial::zero();
    for r in 0..n {
        if matrix[r][0].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial>> = matrix
            .iter()
            .enumerate()
            .filter(|&(rr, _)| rr != r)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let cofactor = matrix[r][0].mul(&minor_determinant(&sub));
        det = if r % 2 == 0 {
            det.add(&cofactor)
        } else {
            det.sub(&cofactor)
        };
    }
    det
}

/// Step 4 (refutation half): solutions with independent images exist
/// iff some n-by-n minor of the image coefficient matrix is nonzero at
/// a common root of the equations. Saturating the equation ideal by
/// each structurally nonzero maximal minor and proving every
/// saturation trivial certifies infeasibility at this size.
pub fn infeasibility_certificate(
    cs: &ConstraintSystem,
    ansatz: &Ansatz,
    config: &SolveConfig,
) -> CertOutcome {
    let n = ansatz.vars.len();
    let model = TriangularAlgebra::new(ansatz.k);
    let dim = model.dim();
    if n > dim {
        return CertOutcome::Infeasible(Vec::new()); // pigeonhole
    }
    // image coefficient matrix: rows = flat slots, columns = vectors
    let mut matrix = vec![vec![Polynomial::zero(); n]; dim];
    for (h0, (slots, vars)) in ansatz.supports.iter().zip(&ansatz.vars).enumerate() {
        for (&slot, &v) in slots.iter().zip(vars) {
            matrix[model.flat(slot) - 1][h0] = Polynomial::var(v);
        }
    }
    let combos: Vec<Vec<usize>> = (0..dim).combinations(n).collect();
    if combos.len() > config.max_minors {
        return CertOutcome::Inconclusive(format!(
            "{} maximal minors exceed the cap of {}",
            combos.len(),
            config.max_minors
        ));
    }
    let mut certificates = Vec::new();
    let mut limit_hit = None;
    for rows in combos {
        let sub: Vec<Vec<Polynomial>> = rows.iter().map(|&r| matrix[r].clone()).collect();
        let det = minor_determinant(&sub);
        if det.is_zero() {
            continue; // structurally zero minor
        }
        let ideal = Ideal::new(cs.equations.clone());
        let (mut saturated, _t) = ideal.saturate_nonzero(&det);
        match saturated.is_trivial(&config.cert_gb) {
            Triviality::Yes => {
                let basis = saturated
                    .groebner(crate::poly::MonomialOrder::GrevLex, &config.cert_gb)
                    .expect("just computed")
                    .to_vec();
                certificates.push(MinorCertificate {
                    minor_rows: rows.iter().map(|&r| model.unflat(r + 1)).collect(),
                    minor: det,
                    basis,
                });
            }
            Triviality::No => return CertOutcome::SolutionsMayExist,
            Triviality::Inconclusive => {
                limit_hit = Some("Groebner resource limit on a minor saturation".to_string());
            }
        }
    }
    match limit_hit {
        Some(reason) => CertOutcome::Inconclusive(reason),
        None => CertOutcome::Infeasible(certificates),
    }
}

/// Replay a stored certificate: `1` must reduce to zero against every
/// stored basis, and the basis must be nonempty.
pub fn recheck_certificates(certs: &[MinorCertificate]) -> bool {
    certs.iter().all(|c| {
        !c.basis.is_empty()
            && crate::poly::reduce(
                &Polynomial::one(),
                &c.basis,
                crate::poly::MonomialOrder::GrevLex,
            )
            .is_zero()
    })
}

/// Per-size audit entry for the minimality loop.
#[derive(Clone, Debug)]
pub enum KOutcome {
    /// certified infeasible (empty certificate list = pigeonhole or
    /// structural rank deficiency)
    Infeasible(Vec<MinorCertificate>),
    Solution(Representation),
    /// neither a certificate nor a solution: carries both halves
    Unresolved { certificate: String, search: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Minimality {
    MinimalCertified,
    UpperBoundOnly,
}

#[derive(Clone, Debug)]
pub enum MinRepOutcome {
    Found { k: usize, rep: Representation, status: Minimality },
    Inconclusive { reason: String },
}

#[derive(Clone, Debug)]
pub struct MinRepReport {
    pub lower_bound: usize,
    pub audit: Vec<(usize, KOutcome)>,
    pub outcome: MinRepOutcome,
}

/// The driver: iterate `k` upward from the structural lower bound,
/// attempt an infeasibility certificate, and search when refutation
/// fails. A solution is minimal-certified when every smaller size from
/// the lower bound on was certified infeasible.
pub fn solve_min_rep(a: &LieAlgebra, config: &SolveConfig) -> Result<MinRepReport, SolverError> {
    if a.is_parametric() {
        return Err(SolverError::ParametricLaw);
    }
    let lb = lower_bound_k(a)?;
    let max_k = config.max_k.unwrap_or(a.dim() + 2);
    let mut audit: Vec<(usize, KOutcome)> = Vec::new();
    for k in lb..=max_k {
        let ansatz = build_ansatz(a, k)?;
        let cs = generate_constraints(a, &ansatz)?;
        // certificates are only worth attempting on small systems;
        // past the gate the Gröbner runs would burn their caps anyway
        let cert = if ansatz.num_vars() <= config.direct_gb_vars {
            infeasibility_certificate(&cs, &ansatz, config)
        } else {
            CertOutcome::Inconclusive(format!(
                "skipped: {} ansatz variables exceed the certificate gate of {}",
                ansatz.num_vars(),
                config.direct_gb_vars
            ))
        };
        match cert {
            CertOutcome::Infeasible(certs) => {
                audit.push((k, KOutcome::Infeasible(certs)));
                continue;
            }
            CertOutcome::SolutionsMayExist | CertOutcome::Inconclusive(_) => {
                let cert_desc = match &cert {
                    CertOutcome::SolutionsMayExist => "solutions may exist".to_string(),
                    CertOutcome::Inconclusive(r) => format!("inconclusive ({r})"),
                    CertOutcome::Infeasible(_) => unreachable!(),
                };
                match search_solution(&cs, &ansatz, config) {
                    SearchResult::Found(rep) => {
                        let defects = verify_representation(a, &rep)?;
                        assert!(
                            defects.is_empty(),
                            "solver produced an invalid representation: {defects:?}"
                        );
                        let certified = audit
                            .iter()
                            .all(|(_, o)| matches!(o, KOutcome::Infeasible(_)));
                        let status = if certified {
                            Minimality::MinimalCertified
                        } else {
                            Minimality::UpperBoundOnly
                        };
                        audit.push((k, KOutcome::Solution(rep.clone())));
                        return Ok(MinRepReport {
                            lower_bound: lb,
                            audit,
                            outcome: MinRepOutcome::Found { k, rep, status },
                        });
                    }
                    SearchResult::NotFound => {
                        audit.push((
                            k,
                            KOutcome::Unresolved {
                                certificate: cert_desc,
                                search: "candidate ladder exhausted".to_string(),
                            },
                        ));
                    }
                    SearchResult::Inconclusive(reason) => {
                        audit.push((
                            k,
                            KOutcome::Unresolved { certificate: cert_desc, search: reason },
                        ));
                    }
                }
            }
        }
    }
    Ok(MinRepReport {
        lower_bound: lb,
        audit,
        outcome: MinRepOutcome::Inconclusive {
            reason: format!("no representation found for sizes up to {max_k}"),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::algebra_from_str;

    fn s3_2() -> LieAlgebra {
        algebra_from_str("dim 3\nbracket 1 3 -> 2: 1\n")
    }

    fn heisenberg3() -> LieAlgebra {
        algebra_from_str("dim 3\nbracket 2 3 -> 1: 1\n")
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound_k(&s3_2()).unwrap(), 2);
        assert_eq!(lower_bound_k(&LieAlgebra::abelian(1)).unwrap(), 1);
        assert_eq!(lower_bound_k(&LieAlgebra::abelian(4)).unwrap(), 3);
    }

    #[test]
    fn ansatz_variable_counts() {
        let a = s3_2();
        let ans2 = build_ansatz(&a, 2).unwrap();
        assert_eq!(
            ans2.vars.iter().map(|v| v.len()).collect::<Vec<_>>(),
            vec![3, 1, 3]
        );
        assert_eq!(ans2.num_vars(), 7);
        let ans3 = build_ansatz(&a, 3).unwrap();
        assert_eq!(
            ans3.vars.iter().map(|v| v.len()).collect::<Vec<_>>(),
            vec![6, 3, 6]
        );
        // e2 sits over the derived ideal {X12, X13, X23}
        assert_eq!(
            ans3.supports[1],
            vec![TriIndex::new(1, 2), TriIndex::new(1, 3), TriIndex::new(2, 3)]
        );
        // abelian: every vector has depth 1, hence full support
        let ab = LieAlgebra::abelian(2);
        let ans = build_ansatz(&ab, 2).unwrap();
        assert_eq!(ans.vars.iter().map(|v| v.len()).collect::<Vec<_>>(), vec![3, 3]);
    }

    #[test]
    fn constraints_match_reference_expansion_at_k2() {
        // variables: e1 -> v0 v1 v2 over X11 X12 X22, e2 -> v3 over X12,
        // e3 -> v4 v5 v6
        let a = s3_2();
        let ansatz = build_ansatz(&a, 2).unwrap();
        let cs = generate_constraints(&a, &ansatz).unwrap();
        let v = |i: u32| Polynomial::var(i);
        let expect = vec![
            // [E1,E2] = 0: (v0 - v2) v3 on X12
            v(0).mul(&v(3)).sub(&v(2).mul(&v(3))),
            // [E1,E3] = E2 on X12
            v(0).mul(&v(5))
                .sub(&v(1).mul(&v(4)))
                .add(&v(1).mul(&v(6)))
                .sub(&v(2).mul(&v(5)))
                .sub(&v(3)),
            // [E2,E3] = 0: v3 (v6 - v4) on X12
            v(3).mul(&v(6)).sub(&v(3).mul(&v(4))),
        ];
        assert_eq!(cs.equations.len(), 3);
        for (got, want) in cs.equations.iter().zip(&expect) {
            assert!(
                got == want || got == &want.neg(),
                "got {got}, want +/-{want}"
            );
        }
        // every equation lands on the X12 slot
        assert!(cs
            .eq_meta
            .iter()
            .all(|(_, slot)| *slot == TriIndex::new(1, 2)));
        // nondegeneracy groups mirror the supports
        assert_eq!(cs.nondegeneracy, vec![vec![0, 1, 2], vec![3], vec![4, 5, 6]]);
        // degree bound
        assert!(cs.equations.iter().all(|p| p.total_degree() <= 2));
    }

    #[test]
    fn certificate_refutes_size_2_for_s3_2() {
        let a = s3_2();
        let ansatz = build_ansatz(&a, 2).unwrap();
        let cs = generate_constraints(&a, &ansatz).unwrap();
        match infeasibility_certificate(&cs, &ansatz, &SolveConfig::default()) {
            CertOutcome::Infeasible(certs) => {
                assert_eq!(certs.len(), 1);
                assert!(recheck_certificates(&certs));
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn certificate_pigeonhole() {
        let a = LieAlgebra::abelian(4);
        let ansatz = build_ansatz(&a, 2).unwrap();
        let cs = generate_constraints(&a, &ansatz).unwrap();
        match infeasibility_certificate(&cs, &ansatz, &SolveConfig::default()) {
            CertOutcome::Infeasible(certs) => assert!(certs.is_empty()),
            other => panic!("expected pigeonhole infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn heisenberg_refuted_at_size_2() {
        let a = heisenberg3();
        let ansatz = build_ansatz(&a, 2).unwrap();
        let cs = generate_constraints(&a, &ansatz).unwrap();
        match infeasibility_certificate(&cs, &ansatz, &SolveConfig::default()) {
            CertOutcome::Infeasible(certs) => {
                assert!(!certs.is_empty());
                assert!(recheck_certificates(&certs));
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn solve_abelian_dim_1() {
        let report = solve_min_rep(&LieAlgebra::abelian(1), &SolveConfig::default()).unwrap();
        match report.outcome {
            MinRepOutcome::Found { k, status, .. } => {
                assert_eq!(k, 1);
                assert_eq!(status, Minimality::MinimalCertified);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_abelian_dim_2() {
        let report = solve_min_rep(&LieAlgebra::abelian(2), &SolveConfig::default()).unwrap();
        match report.outcome {
            MinRepOutcome::Found { k, .. } => assert_eq!(k, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn solve_s3_6_is_minimal_at_2() {
        // law [e1,e3] = -e1
        let a = algebra_from_str("dim 3\nbracket 1 3 -> 1: -1\n");
        let report = solve_min_rep(&a, &SolveConfig::default()).unwrap();
        assert_eq!(report.lower_bound, 2);
        match report.outcome {
            MinRepOutcome::Found { k, rep, status } => {
                assert_eq!(k, 2);
                assert_eq!(status, Minimality::MinimalCertified);
                assert!(verify_representation(&a, &rep).unwrap().is_empty());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn verify_flags_rank_deficiency() {
        // two identical images cannot be independent
        let a = LieAlgebra::abelian(2);
        let mut img: TriVector = BTreeMap::new();
        img.insert(TriIndex::new(1, 2), Scalar::one());
        let rep = Representation::numeric(2, vec![img.clone(), img]);
        let defects = verify_representation(&a, &rep).unwrap();
        assert!(matches!(defects[0], Defect::RankDeficient { rank: 1, expected: 2 }));
    }

    #[test]
    fn verify_size_mismatch() {
        let a = LieAlgebra::abelian(3);
        let rep = Representation::numeric(2, vec![BTreeMap::new()]);
        assert!(matches!(
            verify_representation(&a, &rep),
            Err(SolverError::SizeMismatch { expected: 3, got: 1 })
        ));
    }
}
