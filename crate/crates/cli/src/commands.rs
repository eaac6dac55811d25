use std::collections::BTreeMap;

use mixtrace_core::bounds::{self, FeasibilityMode, ScanSummary, CSV_HEADER};
use mixtrace_core::combinat::build_a2;
use mixtrace_core::field_lab::{self, FieldSample, InjectivityReport};
use mixtrace_core::trace_jacobian::{self, CertificateMode, JacobianCertificate};
use mixtrace_core::{ExponentSet, IntPolynomial};
use serde::Serialize;

use crate::output::{emit, write_atomic};
use crate::{
    CertifyArgs, ConstructArgs, CorpusArgs, ExponentsArgs, Failure, FingerprintArgs, ModeArg, ScanArgs, SeedArgs,
    VerifyArgs,
};

fn mode_of(equality: bool) -> FeasibilityMode {
    if equality {
        FeasibilityMode::Equality
    } else {
        FeasibilityMode::Strict
    }
}

pub fn construct_a(a: ConstructArgs) -> Result<(), Failure> {
    let (_, cert) = trace_jacobian::construct_a_general(
        a.n,
        a.r,
        a.d,
        a.seed.prime,
        a.seed.seed,
        a.seed.max_retries,
        mode_of(a.equality),
    )?;
    let summary = format!("constructed A for n={} r={} d={}: det residue {}", a.n, a.r, a.d, cert.det_residue);
    emit(&cert, a.out.as_deref(), &summary)
}

pub fn certify(a: CertifyArgs) -> Result<(), Failure> {
    if a.r != 2 {
        return Err(Failure::Usage(format!("certify handles r = 2; use construct-a for r = {}", a.r)));
    }
    let mode = if a.exact { CertificateMode::ExactRational } else { CertificateMode::Modular };
    let cert = trace_jacobian::certify_r2(a.n, a.seed.prime, a.seed.seed, a.seed.max_retries, mode)?;
    let summary = format!("certified A_{}: det residue {} (attempt {})", a.n, cert.det_residue, cert.attempt);
    emit(&cert, a.out.as_deref(), &summary)
}

pub fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.certificate)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", a.certificate.display())))?;
    let cert: JacobianCertificate =
        serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("malformed certificate: {e}")))?;
    let residue = trace_jacobian::verify_certificate(&cert)?;
    println!("ok: n={} r={} det residue {residue} mod {}", cert.n, cert.r, cert.prime);
    Ok(())
}

pub fn exponents(a: ExponentsArgs) -> Result<(), Failure> {
    let rep = bounds::bound_report(a.n, mode_of(a.equality))?;
    println!("{CSV_HEADER}");
    println!("{}", rep.csv_row());
    if rep.below_lemma_range {
        eprintln!("note: n={} is below 6, outside the range of the general construction", a.n);
    }
    Ok(())
}

#[derive(Serialize)]
struct BothModes {
    strict: ScanSummary,
    equality: ScanSummary,
}

pub fn scan(a: ScanArgs) -> Result<(), Failure> {
    let run = |mode| bounds::scan_constant(a.n_min, a.n_max, mode);
    let write_table = |res: &bounds::ScanResult| -> Result<(), Failure> {
        if let Some(path) = &a.table {
            let mut csv = String::with_capacity(64 * res.table.len());
            csv.push_str(CSV_HEADER);
            csv.push('\n');
            for rep in &res.table {
                csv.push_str(&rep.csv_row());
                csv.push('\n');
            }
            write_atomic(path, csv.as_bytes())?;
        }
        Ok(())
    };
    let line = |s: &ScanSummary| format!("{}: argmax n={} max ratio={:.12}", s.mode, s.argmax_n, s.max_ratio);
    match a.mode {
        ModeArg::Strict | ModeArg::Equality => {
            let mode = if a.mode == ModeArg::Strict { FeasibilityMode::Strict } else { FeasibilityMode::Equality };
            let res = run(mode)?;
            write_table(&res)?;
            emit(&res.summary, a.out.as_deref(), &line(&res.summary))
        }
        ModeArg::Both => {
            let strict = run(FeasibilityMode::Strict)?;
            write_table(&strict)?;
            let equality = run(FeasibilityMode::Equality)?.summary;
            let summary = format!("{}; {}", line(&strict.summary), line(&equality));
            emit(&BothModes { strict: strict.summary, equality }, a.out.as_deref(), &summary)
        }
    }
}

/// The pair set for `r = 2`, otherwise a constructed degree-`d` set.
fn exponent_set(n: usize, r: usize, d: Option<u32>, seed: &SeedArgs) -> Result<ExponentSet, Failure> {
    match (r, d) {
        (2, _) => Ok(build_a2(n)?.set),
        (_, Some(d)) => Ok(trace_jacobian::construct_a_general(
            n,
            r,
            d,
            seed.prime,
            seed.seed,
            seed.max_retries,
            FeasibilityMode::Strict,
        )?
        .0),
        (_, None) => Err(Failure::Usage(format!("r = {r} needs --d"))),
    }
}

fn accept(f: &IntPolynomial) -> Result<FieldSample, Failure> {
    field_lab::analyze_poly(f).map_err(|why| Failure::Usage(format!("{f} rejected: {why}")))
}

pub fn fingerprint(a: FingerprintArgs) -> Result<(), Failure> {
    let f: IntPolynomial = a.poly.parse()?;
    let sample = accept(&f)?;
    let set = exponent_set(sample.degree(), a.r, a.d, &a.seed)?;
    let fp = field_lab::fingerprint(&sample, &set, a.coeff_bound)?;
    let summary = format!("fingerprint of {f}: {} values", fp.values.len());
    emit(&fp, a.out.as_deref(), &summary)
}

#[derive(Serialize)]
struct CorpusOutput {
    source: String,
    candidates: usize,
    accepted: usize,
    rejected: BTreeMap<String, usize>,
    set: Vec<Vec<u32>>,
    prime_bound: u64,
    report: InjectivityReport,
    /// Accepted polynomials, indexed as in `report.collisions`.
    fields: Vec<IntPolynomial>,
}

fn rejection_key(r: &field_lab::Rejection) -> &'static str {
    use field_lab::Rejection::*;
    match r {
        DegreeOutOfRange(_) => "degree_out_of_range",
        NotSquarefree => "not_squarefree",
        NotTotallyReal { .. } => "not_totally_real",
        NotIrreducible => "not_irreducible",
        IrreducibilityUnknown => "irreducibility_unknown",
    }
}

pub fn corpus_report(a: CorpusArgs) -> Result<(), Failure> {
    let (source, candidates) = match (&a.corpus, a.cubic_height) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
            (path.display().to_string(), field_lab::parse_corpus(&text)?)
        }
        (None, Some(h)) if h >= 0 => (format!("cubics of height {h}"), field_lab::cubic_candidates(h)),
        _ => return Err(Failure::Usage("give exactly one of --corpus or --cubic-height (>= 0)".into())),
    };
    let mut rejected = BTreeMap::new();
    let mut accepted = Vec::new();
    for f in &candidates {
        match field_lab::analyze_poly(f) {
            Ok(s) => accepted.push(s),
            Err(why) => *rejected.entry(rejection_key(&why).to_string()).or_insert(0) += 1,
        }
    }
    let Some(first) = accepted.first() else {
        return Err(Failure::Usage("no accepted fields in corpus".into()));
    };
    let n = first.degree();
    if accepted.iter().any(|s| s.degree() != n) {
        return Err(Failure::Usage("corpus fields must share one degree".into()));
    }
    let set = exponent_set(n, a.r, a.d, &a.seed)?;
    let report = field_lab::injectivity_report(&accepted, &set, a.prime_bound, a.coeff_bound)?;
    let summary = format!(
        "{} fields: {} certified distinct pairs, {} collisions, {} undetermined",
        report.fields, report.certified_distinct_pairs, report.fingerprint_collisions, report.undetermined_pairs
    );
    let collisions = report.fingerprint_collisions;
    let out = CorpusOutput {
        source,
        candidates: candidates.len(),
        accepted: accepted.len(),
        rejected,
        set: set.to_arrays(),
        prime_bound: a.prime_bound,
        report,
        fields: accepted.into_iter().map(|s| s.f).collect(),
    };
    emit(&out, a.out.as_deref(), &summary)?;
    if collisions > 0 {
        return Err(Failure::Certification(format!("{collisions} fingerprint collisions between distinct fields")));
    }
    Ok(())
}
