//! The shipped catalog of solvable Lie algebra laws and claimed
//! minimal triangular representatives, parametric family generators,
//! and the batch verifier with its errata report.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Constraint, JacobiReport, LieAlgebra};
use crate::format::{
    parse_algebra_file, parse_rep_file, render_tri_vector, ParseError,
};
use crate::gauss::GaussianRational;
use crate::scalar::{ParamRing, Scalar};
use crate::solver::{
    lower_bound_k, verify_representation, Defect, Representation,
};
use crate::triangular::{TriIndex, TriVector};

include!(concat!(env!("OUT_DIR"), "/catalog_data.rs"));

/// The committed errata baseline that `verify-all` diffs against.
pub static KNOWN_ERRATA: &str =
    include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/known_errata.txt"));

#[derive(Clone, Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog file `{0}` is missing")]
    MissingFile(String),
    #[error("bad index line: {0}")]
    BadIndex(String),
    #[error("{file}: {err}")]
    Parse { file: String, err: ParseError },
}

/// One catalog row: a law, the claimed representative, the claimed
/// invariant value and a provenance note. Laws and representatives are
/// stored verbatim from the source tables even when suspect; the
/// verifier flags the defects.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub law: LieAlgebra,
    pub jacobi: JacobiReport,
    pub rep: Representation,
    pub claimed_mu: usize,
    pub source: String,
    pub law_text: String,
    pub rep_text: String,
}

fn embedded(name: &str) -> Result<&'static str, CatalogError> {
    CATALOG_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| CatalogError::MissingFile(name.to_string()))
}

/// Load the shipped catalog in index order.
pub fn builtin() -> Result<Vec<CatalogEntry>, CatalogError> {
    let index = embedded("index.txt")?;
    let mut entries = Vec::new();
    for raw in index.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(|f| f.trim()).collect();
        if fields.len() != 5 {
            return Err(CatalogError::BadIndex(line.to_string()));
        }
        let (id, law_file, rep_file, mu, source) =
            (fields[0], fields[1], fields[2], fields[3], fields[4]);
        let claimed_mu: usize = mu
            .parse()
            .map_err(|_| CatalogError::BadIndex(line.to_string()))?;
        let law_text = embedded(law_file)?;
        let rep_text = embedded(rep_file)?;
        let (law, jacobi) = parse_algebra_file(law_text)
            .map_err(|err| CatalogError::Parse { file: law_file.to_string(), err })?;
        let rep = parse_rep_file(rep_text)
            .map_err(|err| CatalogError::Parse { file: rep_file.to_string(), err })?;
        entries.push(CatalogEntry {
            id: id.to_string(),
            law,
            jacobi,
            rep,
            claimed_mu,
            source: source.to_string(),
            law_text: law_text.to_string(),
            rep_text: rep_text.to_string(),
        });
    }
    Ok(entries)
}

pub fn find(entries: &[CatalogEntry], id: &str) -> Option<usize> {
    entries.iter().position(|e| e.id == id)
}

// ---------------------------------------------------------------------------
// family generators

fn tri(i: usize, j: usize, c: Scalar) -> (TriIndex, Scalar) {
    (TriIndex::new(i, j), c)
}

fn assert_valid(label: &str, law: &LieAlgebra, rep: &Representation) {
    let defects = verify_representation(law, rep).expect("sized correctly");
    assert!(defects.is_empty(), "{label}: generated representative invalid: {defects:?}");
}

/// The solvable family with law `[e_i, e_n] = e_i` for `i < n`;
/// representative `e_j = X_{1,j+1}` (j < n) and `e_n = -X_{1,1}` of
/// size exactly `n`.
pub fn family_sn(n: usize) -> (LieAlgebra, Representation) {
    assert!(n >= 2, "family requires n >= 2");
    let mut law = LieAlgebra::abelian(n);
    for i in 1..n {
        law.set_bracket(i, n, vec![(i, Scalar::one())]).expect("indices");
    }
    let mut images: Vec<TriVector> = Vec::new();
    for j in 1..n {
        images.push([tri(1, j + 1, Scalar::one())].into_iter().collect());
    }
    images.push([tri(1, 1, Scalar::int(-1))].into_iter().collect());
    let rep = Representation::numeric(n, images);
    assert_valid("s_n family", &law, &rep);
    (law, rep)
}

/// The Heisenberg algebra on `2n+1` generators with
/// `[e_{2i}, e_{2i+1}] = e_1`; representative of size `n + 2` with
/// `e_{2j+1} = X_{j+1,n+2}` (j = 0..n) and `e_{2i} = X_{1,i+1}` for
/// `i = 1..n` (larger even ranges would add images with no matching
/// basis vector).
pub fn family_heisenberg(n: usize) -> (LieAlgebra, Representation) {
    assert!(n >= 1, "family requires n >= 1");
    let dim = 2 * n + 1;
    let mut law = LieAlgebra::abelian(dim);
    for i in 1..=n {
        law.set_bracket(2 * i, 2 * i + 1, vec![(1, Scalar::one())])
            .expect("indices");
    }
    let k = n + 2;
    let mut images: Vec<TriVector> = vec![BTreeMap::new(); dim];
    for j in 0..=n {
        images[2 * j] = [tri(j + 1, n + 2, Scalar::one())].into_iter().collect();
    }
    for i in 1..=n {
        images[2 * i - 1] = [tri(1, i + 1, Scalar::one())].into_iter().collect();
    }
    let rep = Representation::numeric(k, images);
    assert_valid("heisenberg family", &law, &rep);
    (law, rep)
}

/// The model filiform algebra with `[e_1, e_h] = e_{h-1}` for
/// `3 <= h <= n`; representative `e_1 = sum X_{i,i+1}` plus
/// `e_j = X_{j-1,n}`, size exactly `n`.
pub fn family_filiform(n: usize) -> (LieAlgebra, Representation) {
    assert!(n >= 3, "family requires n >= 3");
    let mut law = LieAlgebra::abelian(n);
    for h in 3..=n {
        law.set_bracket(1, h, vec![(h - 1, Scalar::one())]).expect("indices");
    }
    let mut images: Vec<TriVector> = Vec::new();
    images.push((1..=n - 2).map(|i| tri(i, i + 1, Scalar::one())).collect());
    for j in 2..=n {
        images.push([tri(j - 1, n, Scalar::one())].into_iter().collect());
    }
    let rep = Representation::numeric(n, images);
    assert_valid("filiform family", &law, &rep);
    (law, rep)
}

// ---------------------------------------------------------------------------
// batch verification

#[derive(Clone, Debug)]
pub enum SampleOutcome {
    Valid,
    Defects(Vec<String>),
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct SampleReport {
    pub assignment: String,
    pub outcome: SampleOutcome,
}

#[derive(Clone, Debug)]
pub struct EntryReport {
    pub id: String,
    pub jacobi_pass: bool,
    /// rendered symbolic defects; empty means the representative is valid
    pub symbolic_defects: Vec<String>,
    /// None when the law is not solvable (flagged separately)
    pub lower_bound: Option<usize>,
    pub claimed_mu: usize,
    pub rep_size: usize,
    pub samples: Vec<SampleReport>,
    /// reasons the row is flagged; empty means consistent with claim
    pub flags: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub seed: u64,
    pub samples_per_param: usize,
    pub entries: Vec<EntryReport>,
}

fn render_defect(d: &Defect) -> String {
    match d {
        Defect::RankDeficient { rank, expected } => {
            format!("rank deficiency: images span dimension {rank} < {expected}")
        }
        Defect::BracketMismatch { i, j, got, expected } => format!(
            "bracket mismatch on (e{i},e{j}): commutator {} but law requires {}",
            render_tri_vector(got),
            render_tri_vector(expected)
        ),
    }
}

fn base_candidates() -> Vec<GaussianRational> {
    vec![
        GaussianRational::from_int(2),
        GaussianRational::from_int(3),
        GaussianRational::from_ratio(1, 2),
        GaussianRational::from_int(-2),
        GaussianRational::from_int(5),
    ]
}

fn constraint_holds(c: &Constraint, values: &BTreeMap<String, GaussianRational>) -> bool {
    match c {
        Constraint::NonZero(s) => match s.substitute(values) {
            Ok(v) => v.constant_value().map_or(true, |c| !c.is_zero()),
            Err(_) => false,
        },
        Constraint::NonNegative(s) => match s.substitute(values) {
            Ok(v) => v.constant_value().map_or(true, |c| {
                c.is_real() && c.re() >= &num_rational::BigRational::from_integer(0.into())
            }),
            Err(_) => false,
        },
        Constraint::PlusMinusOne(name) => values.get(name).map_or(true, |v| {
            v == &GaussianRational::from_int(1) || v == &GaussianRational::from_int(-1)
        }),
        Constraint::Other(_) => true,
    }
}

/// Parameters eligible for concrete substitution: declared names minus
/// relation variables (radicals stay symbolic with their relation).
fn substitutable_params(ring: &Arc<ParamRing>) -> Vec<String> {
    ring.names()
        .iter()
        .enumerate()
        .filter(|(idx, _)| !ring.relations().contains_key(&(*idx as u32)))
        .map(|(_, n)| n.clone())
        .collect()
}

fn draw_samples(
    entry: &CatalogEntry,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<BTreeMap<String, GaussianRational>> {
    let ring = ring_of_entry(entry);
    let params = substitutable_params(&ring);
    if params.is_empty() {
        return Vec::new();
    }
    let mut per_param: BTreeMap<String, Vec<GaussianRational>> = BTreeMap::new();
    for p in &params {
        let restricted = entry
            .law
            .constraints
            .iter()
            .any(|c| matches!(c, Constraint::PlusMinusOne(name) if name == p));
        let candidates = if restricted {
            vec![GaussianRational::from_int(1), GaussianRational::from_int(-1)]
        } else {
            base_candidates()
        };
        per_param.insert(p.clone(), candidates);
    }
    let mut out = Vec::new();
    'sample: for _ in 0..samples {
        for _attempt in 0..100 {
            let mut assignment = BTreeMap::new();
            for p in &params {
                let cands = &per_param[p];
                let v = cands[rng.gen_range(0..cands.len())].clone();
                assignment.insert(p.clone(), v);
            }
            let ok = entry
                .law
                .constraints
                .iter()
                .all(|c| constraint_holds(c, &assignment));
            if ok {
                out.push(assignment);
                continue 'sample;
            }
        }
        break; // no admissible assignment found; reported by caller
    }
    out
}

/// Union of the parameter rings of the law and the representative,
/// relations included (so radicals stay out of the sample draw).
fn ring_of_entry(entry: &CatalogEntry) -> Arc<ParamRing> {
    crate::scalar::ring_union(entry.law.ring(), &entry.rep.ring)
}

fn substitute_rep(
    rep: &Representation,
    values: &BTreeMap<String, GaussianRational>,
) -> Result<Representation, String> {
    let mut images = Vec::new();
    let mut ring = ParamRing::empty();
    for tv in &rep.images {
        let mut out: TriVector = BTreeMap::new();
        for (idx, c) in tv {
            let c = c
                .substitute(values)
                .map_err(|e| format!("substitution failed: {e}"))?;
            if !c.ring().is_empty() {
                ring = c.ring().clone();
            }
            if !c.is_zero() {
                out.insert(*idx, c);
            }
        }
        images.push(out);
    }
    Ok(Representation { k: rep.k, images, ring })
}

/// Verify one catalog entry: Jacobi, symbolic representative check,
/// lower bound vs claim, and (for parametric rows) sampled concrete
/// substitutions.
pub fn verify_entry(
    entry: &CatalogEntry,
    samples_per_param: usize,
    rng: &mut ChaCha8Rng,
) -> EntryReport {
    let jacobi_pass = entry.jacobi.passed();
    let symbolic = verify_representation(&entry.law, &entry.rep);
    let symbolic_defects: Vec<String> = match &symbolic {
        Ok(defects) => defects.iter().map(render_defect).collect(),
        Err(e) => vec![e.to_string()],
    };
    let lower_bound = lower_bound_k(&entry.law).ok();
    let mut samples = Vec::new();
    if entry.law.is_parametric() || !entry.rep.ring.is_empty() {
        let wanted = draw_samples(entry, samples_per_param, rng);
        if wanted.len() < samples_per_param {
            samples.push(SampleReport {
                assignment: "-".to_string(),
                outcome: SampleOutcome::Skipped(
                    "no admissible parameter assignment found".to_string(),
                ),
            });
        }
        for assignment in wanted {
            let rendered = assignment
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            let outcome = (|| -> Result<SampleOutcome, String> {
                let law = entry
                    .law
                    .substitute(&assignment)
                    .map_err(|e| format!("law substitution failed: {e}"))?;
                let rep = substitute_rep(&entry.rep, &assignment)?;
                match verify_representation(&law, &rep) {
                    Ok(defects) if defects.is_empty() => Ok(SampleOutcome::Valid),
                    Ok(defects) => Ok(SampleOutcome::Defects(
                        defects.iter().map(render_defect).collect(),
                    )),
                    Err(e) => Err(e.to_string()),
                }
            })();
            samples.push(SampleReport {
                assignment: rendered,
                outcome: match outcome {
                    Ok(o) => o,
                    Err(reason) => SampleOutcome::Skipped(reason),
                },
            });
        }
    }

    let mut flags = Vec::new();
    if !jacobi_pass {
        flags.push("law fails the Jacobi identity".to_string());
    }
    if entry.rep.k != entry.claimed_mu {
        flags.push(format!(
            "representative size {} differs from claimed invariant {}",
            entry.rep.k, entry.claimed_mu
        ));
    }
    match lower_bound {
        Some(lb) => {
            if lb > entry.claimed_mu {
                flags.push(format!(
                    "structural lower bound {lb} exceeds claimed invariant {}",
                    entry.claimed_mu
                ));
            }
        }
        None => flags.push("law is not solvable".to_string()),
    }
    for d in &symbolic_defects {
        flags.push(d.clone());
    }
    for s in &samples {
        if let SampleOutcome::Defects(ds) = &s.outcome {
            for d in ds {
                flags.push(format!("at {}: {}", s.assignment, d));
            }
        }
    }
    EntryReport {
        id: entry.id.clone(),
        jacobi_pass,
        symbolic_defects,
        lower_bound,
        claimed_mu: entry.claimed_mu,
        rep_size: entry.rep.k,
        samples,
        flags,
    }
}

/// Standing notes always emitted at the top of the errata section.
fn standing_notes() -> Vec<String> {
    vec![
        "note: heisenberg family even-index images are e_{2i} = X_{1,i+1} for i = 1..n; \
         extending past n would add images with no matching basis vector"
            .to_string(),
    ]
}

/// Verify every entry. Deterministic for a fixed seed; `jobs` only
/// splits the work, never the result order.
pub fn verify_all(
    entries: &[CatalogEntry],
    samples_per_param: usize,
    seed: u64,
    jobs: usize,
) -> VerificationReport {
    // per-entry RNG derived from (seed, index) so parallelism cannot
    // change the draws
    let run = |idx: usize, entry: &CatalogEntry| -> EntryReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((idx as u64) << 32));
        verify_entry(entry, samples_per_param, &mut rng)
    };
    let reports: Vec<EntryReport> = if jobs <= 1 {
        entries.iter().enumerate().map(|(i, e)| run(i, e)).collect()
    } else {
        let mut slots: Vec<Option<EntryReport>> = vec![None; entries.len()];
        let chunk = entries.len().div_ceil(jobs);
        std::thread::scope(|scope| {
            let mut handles = Vec::new();
            for (start, slice) in entries.chunks(chunk).enumerate().map(|(c, s)| (c * chunk, s)) {
                handles.push(scope.spawn(move || {
                    slice
                        .iter()
                        .enumerate()
                        .map(|(off, e)| (start + off, run(start + off, e)))
                        .collect::<Vec<_>>()
                }));
            }
            for h in handles {
                for (idx, rep) in h.join().expect("verification worker") {
                    slots[idx] = Some(rep);
                }
            }
        });
        slots.into_iter().map(|s| s.expect("all filled")).collect()
    };
    VerificationReport { seed, samples_per_param, entries: reports }
}

impl VerificationReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("catalog verification report\n");
        out.push_str(&format!(
            "seed {}  samples-per-param {}  entries {}\n\n",
            self.seed,
            self.samples_per_param,
            self.entries.len()
        ));
        for e in &self.entries {
            let jacobi = if e.jacobi_pass { "pass" } else { "FAIL" };
            let rep = if e.symbolic_defects.is_empty() {
                "valid".to_string()
            } else {
                format!("defective({})", e.symbolic_defects.len())
            };
            let lb = e
                .lower_bound
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".to_string());
            let consistent = if e.flags.is_empty() { "yes" } else { "flagged" };
            out.push_str(&format!(
                "{}: jacobi={} rep={} lower-bound={} claimed-mu={} consistent={}\n",
                e.id, jacobi, rep, lb, e.claimed_mu, consistent
            ));
            for s in &e.samples {
                let verdict = match &s.outcome {
                    SampleOutcome::Valid => "valid".to_string(),
                    SampleOutcome::Defects(d) => format!("defective({})", d.len()),
                    SampleOutcome::Skipped(r) => format!("skipped: {r}"),
                };
                out.push_str(&format!("  sample {} -> {}\n", s.assignment, verdict));
            }
        }
        out.push('\n');
        out.push_str(&self.errata_text());
        out
    }

    /// The errata section alone; this is what must match the committed
    /// baseline byte for byte.
    pub fn errata_text(&self) -> String {
        let mut out = String::from("== errata ==\n");
        for note in standing_notes() {
            out.push_str(&note);
            out.push('\n');
        }
        let mut any = false;
        for e in &self.entries {
            for flag in &e.flags {
                out.push_str(&format!("{}: {}\n", e.id, flag));
                any = true;
            }
        }
        if !any {
            out.push_str("no entry defects\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_verify_up_to_10() {
        for n in 2..=10 {
            let (law, rep) = family_sn(n);
            assert_eq!(rep.k, n);
            assert!(verify_representation(&law, &rep).unwrap().is_empty(), "sn {n}");
        }
        for n in 1..=10 {
            let (law, rep) = family_heisenberg(n);
            assert_eq!(rep.k, n + 2);
            assert_eq!(law.dim(), 2 * n + 1);
            assert!(
                verify_representation(&law, &rep).unwrap().is_empty(),
                "heisenberg {n}"
            );
        }
        for n in 3..=10 {
            let (law, rep) = family_filiform(n);
            assert_eq!(rep.k, n);
            assert!(
                verify_representation(&law, &rep).unwrap().is_empty(),
                "filiform {n}"
            );
        }
    }

    #[test]
    fn heisenberg_1_matches_reference_images() {
        let (_, rep) = family_heisenberg(1);
        let img = |h: usize| -> Vec<TriIndex> { rep.images[h].keys().copied().collect() };
        assert_eq!(img(0), vec![TriIndex::new(1, 3)]);
        assert_eq!(img(1), vec![TriIndex::new(1, 2)]);
        assert_eq!(img(2), vec![TriIndex::new(2, 3)]);
    }

    #[test]
    fn catalog_loads_and_is_unique() {
        let entries = builtin().expect("catalog loads");
        assert!(entries.len() >= 61, "got {} entries", entries.len());
        let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), entries.len(), "duplicate ids");
    }

    #[test]
    fn every_law_passes_jacobi() {
        for entry in builtin().unwrap() {
            assert!(
                entry.jacobi.passed(),
                "{} fails the Jacobi identity",
                entry.id
            );
        }
    }

    #[test]
    fn every_law_is_solvable() {
        for entry in builtin().unwrap() {
            assert!(
                entry.law.derived_series_dims().is_ok(),
                "{} is not solvable",
                entry.id
            );
        }
    }

    #[test]
    fn verify_all_is_deterministic() {
        let entries = builtin().unwrap();
        let a = verify_all(&entries, 2, 7, 1).render();
        let b = verify_all(&entries, 2, 7, 1).render();
        assert_eq!(a, b);
        let c = verify_all(&entries, 2, 7, 3).render();
        assert_eq!(a, c, "job count changed the report");
    }
}
