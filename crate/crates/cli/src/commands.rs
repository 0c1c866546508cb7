use std::collections::BTreeMap;
use std::path::Path;

use bdspace::canonical::{bd_expansion, cid_canonical, cis_canonical, lone_orbital, qubit_subspace};
use bdspace::io::{
    fmt_complex, fmt_g, load_qubits, load_state_file, parse_qubit_file, random_state, render_diagram, save_qubits,
    save_state_file, to_json, QubitFile, StateFile,
};
use bdspace::random::{haar_unitary, rng_for};
use bdspace::{
    check_representability, embed as embed_state, expansion_from_cis, expansion_from_slater, invariants,
    max_overlap_cid, max_overlap_cis, max_overlap_lowrank, max_overlap_slater, max_overlap_type4a, natural_spectrum,
    one_rdm, unembed as unembed_state, CIExpansion, Error, OverlapResult, Result, ThreeQubitState, Trivector, TypeTag,
};
use serde_json::json;

use crate::report::{self, Report};
use crate::{Class, Form};

/// Anything farther than this from unit norm is reported and normalized.
const NORM_TOL: f64 = 1e-12;
/// Overlap a state needs with its own class approximant to count as a member.
const MEMBER_TOL: f64 = 1e-7;
const RECONSTRUCT_TOL: f64 = 1e-8;
/// Table rows below this magnitude are left out; the JSON keeps them.
const SHOW_TOL: f64 = 1e-12;

fn normalized(t: Trivector, r: &mut Report) -> Result<Trivector> {
    let n = t.norm();
    if n < 1e-12 {
        return Err(Error::Precondition { what: "state is zero", residual: n });
    }
    if (n - 1.0).abs() > NORM_TOL {
        r.field("input norm", format!("{} (normalized)", fmt_g(n)));
        r.set("input_norm", json!(n));
    }
    Ok(t * (1.0 / n))
}

fn load(path: &Path, r: &mut Report) -> Result<Trivector> {
    normalized(load_state_file(path)?.state()?, r)
}

fn reconstructs(e: &CIExpansion, t: &Trivector) -> Result<()> {
    let residual = e.residual(t);
    if residual > RECONSTRUCT_TOL {
        return Err(Error::Certificate { what: "expansion does not reconstruct the state", residual });
    }
    Ok(())
}

fn membership(res: &OverlapResult, what: &'static str) -> Result<()> {
    if res.overlap < 1.0 - MEMBER_TOL {
        return Err(Error::Precondition { what, residual: 1.0 - res.overlap });
    }
    Ok(())
}

pub fn analyze(path: &Path) -> Result<u8> {
    let mut r = Report::new();
    let t = load(path, &mut r)?;
    let nat = natural_spectrum(&t);
    let rep = check_representability(&nat.lambdas, 1e-9);
    let inv = invariants(&t);
    r.field("occupations", report::list(&nat.lambdas));
    r.field("pair sums - 1", report::list(&rep.equality_margins));
    r.field("l5 + l6 - l4", fmt_g(rep.inequality_margin));
    r.field("representable", if rep.ok() { "yes" } else { "no" });
    if rep.saturated {
        r.field("", "inequality saturated");
    }
    r.field("rank", inv.rank.to_string());
    r.field("norm squared", fmt_g(inv.m1));
    r.field("sym123", report::list(&inv.sym123));
    r.field("|hyperdet|^2", fmt_g(inv.hyperdet_mod2));
    r.field("gl6 class", format!("{:?}", inv.bd_class));
    let tags: Vec<String> = inv.type_tags.iter().map(|t| t.to_string()).collect();
    r.field("tags", tags.join(" "));
    for b in &inv.borderline {
        r.field("borderline", b);
    }
    r.set("occupations", json!(nat.lambdas));
    r.set(
        "representability",
        json!({
            "equality_margins": rep.equality_margins,
            "inequality_margin": rep.inequality_margin,
            "equalities_ok": rep.equalities_ok,
            "inequality_ok": rep.inequality_ok,
            "saturated": rep.saturated,
        }),
    );
    r.set("report", json!(inv));
    r.print();
    Ok(0)
}

fn canonical_expansion(t: &Trivector, form: Form, restarts: usize, seed: u64) -> Result<CIExpansion> {
    let e = match form {
        Form::Bd => bd_expansion(t).expansion,
        Form::Lone => lone_orbital(t),
        Form::Cis => {
            let res = max_overlap_cis(t, restarts, seed);
            membership(&res, "state is not CIS")?;
            cis_canonical(t, &res.reference_space())?
        }
        Form::Cid => {
            let res = max_overlap_cid(t, restarts, seed);
            membership(&res, "state is not CID")?;
            cid_canonical(t, &res.reference_space())?
        }
        Form::Slater5 => expansion_from_slater(t, &max_overlap_slater(t, restarts, seed))?,
        Form::Cis5 => expansion_from_cis(t, &max_overlap_cis(t, restarts, seed))?,
    };
    reconstructs(&e, t)?;
    Ok(e)
}

pub fn canonical(path: &Path, form: Form, output: Option<&Path>, restarts: usize, seed: u64) -> Result<u8> {
    let mut r = Report::new();
    let t = load(path, &mut r)?;
    let e = canonical_expansion(&t, form, restarts, seed)?;
    let name = format!("{form:?}").to_lowercase();
    r.field("form", format!("{name} ({:?})", e.shape));
    r.line("");
    r.line(render_diagram(&e, SHOW_TOL).trim_end());
    r.line("");
    r.field("residual", fmt_g(e.residual(&t)));
    r.set("form", json!(name));
    r.set("expansion", report::expansion(&e, &t));
    if let Some(out) = output {
        let mut file = StateFile::from_state(&e.basis.coefficients(&t)).with_basis(&e.basis);
        file.metadata = Some(BTreeMap::from([("form".to_string(), name)]));
        save_state_file(&file, out)?;
        r.field("written", out.display().to_string());
    }
    r.print();
    Ok(0)
}

fn overlap_lines(r: &mut Report, overlap: f64, restarts_used: usize) {
    r.field("overlap", fmt_g(overlap));
    r.field("overlap squared", fmt_g(overlap * overlap));
    r.field("restarts used", restarts_used.to_string());
    r.set("overlap", json!(overlap));
    r.set("restarts_used", json!(restarts_used));
}

fn expansion_lines(r: &mut Report, e: &CIExpansion, t: &Trivector) {
    r.line("");
    r.line(render_diagram(e, SHOW_TOL).trim_end());
    r.field("residual", fmt_g(e.residual(t)));
    r.set("expansion", report::expansion(e, t));
}

fn qubit_input(path: &Path, r: &mut Report) -> Result<ThreeQubitState> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if let Ok(file) = parse_qubit_file(&text) {
        let q = file.state()?;
        let n = q.norm();
        if n < 1e-12 {
            return Err(Error::Precondition { what: "state is zero", residual: n });
        }
        return Ok(q.normalized());
    }
    let t = normalized(bdspace::io::parse_state_file(&text)?.state()?, r)?;
    r.field("qubit pairing", "natural");
    unembed_state(&t, &qubit_subspace(&t))
}

pub fn maxoverlap(path: &Path, class: Class, restarts: usize, seed: u64) -> Result<u8> {
    let mut r = Report::new();
    r.field("class", format!("{class:?}").to_lowercase());
    r.set("class", json!(format!("{class:?}").to_lowercase()));
    if let Class::Type4a = class {
        let q = qubit_input(path, &mut r)?;
        let res = max_overlap_type4a(&q, restarts, seed);
        overlap_lines(&mut r, res.overlap, res.restarts_used);
        r.line("certificate");
        report::certificate_lines(&mut r, &res.certificate);
        r.set("certificate", report::certificate(&res.certificate));
        r.line("approximant");
        for (n, a) in res.approximant.amps.iter().enumerate() {
            r.line(format!("  {:03b}   {}", n, fmt_complex(*a)));
        }
        r.set("approximant", json!(QubitFile::from_state(&res.approximant)));
        r.print();
        return Ok(0);
    }
    let t = load(path, &mut r)?;
    let res = match class {
        Class::Slater => max_overlap_slater(&t, restarts, seed),
        Class::Lowrank => max_overlap_lowrank(&t),
        Class::Cis => max_overlap_cis(&t, restarts, seed),
        Class::Cid => max_overlap_cid(&t, restarts, seed),
        Class::Type4a => unreachable!(),
    };
    overlap_lines(&mut r, res.overlap, res.restarts_used);
    r.line("certificate");
    report::certificate_lines(&mut r, &res.certificate);
    r.set("certificate", report::certificate(&res.certificate));
    r.set("approximant", json!(StateFile::from_state(&res.approximant)));
    r.set("frame", report::matrix(res.frame.matrix()));
    match class {
        Class::Slater => expansion_lines(&mut r, &expansion_from_slater(&t, &res)?, &t),
        Class::Cis => expansion_lines(&mut r, &expansion_from_cis(&t, &res)?, &t),
        Class::Lowrank => {
            if let Some(split) = &res.split {
                r.field("split residual", fmt_g(split.residual(&t)));
                r.set("split_residual", json!(split.residual(&t)));
            }
        }
        _ => {}
    }
    r.print();
    Ok(0)
}

pub fn random(seed: u64, class: Option<TypeTag>, output: Option<&Path>) -> Result<u8> {
    let t = random_state(seed, class);
    let mut file = StateFile::from_state(&t);
    let mut meta = BTreeMap::from([("seed".to_string(), seed.to_string())]);
    if let Some(tag) = class {
        meta.insert("class".to_string(), tag.to_string());
    }
    file.metadata = Some(meta);
    match output {
        Some(out) => {
            save_state_file(&file, out)?;
            let mut r = Report::new();
            r.field("seed", seed.to_string());
            r.field("class", class.map_or("generic".to_string(), |c| c.to_string()));
            r.field("written", out.display().to_string());
            r.set("state", json!(file));
            r.print();
        }
        None => report::emit(&(to_json(&file) + "\n")),
    }
    Ok(0)
}

struct Checks {
    failed: usize,
    total: usize,
}

impl Checks {
    fn check(&mut self, r: &mut Report, name: &str, ok: bool, detail: String) {
        self.total += 1;
        if !ok {
            self.failed += 1;
        }
        r.line(format!("{} {name:<24}{detail}", if ok { "PASS" } else { "FAIL" }));
    }

    fn residual(&mut self, r: &mut Report, name: &str, value: Result<f64>, tol: f64) {
        match value {
            Ok(v) => self.check(r, name, v <= tol, format!("{} (tol {})", fmt_g(v), fmt_g(tol))),
            Err(e) => self.check(r, name, false, e.to_string()),
        }
    }
}

pub fn verify(path: &Path, restarts: usize, seed: u64) -> Result<u8> {
    let mut r = Report::new();
    let t = load(path, &mut r)?;
    let mut c = Checks { failed: 0, total: 0 };

    let g = one_rdm(&t).matrix;
    let herm = (g - g.adjoint()).norm();
    let trace = (g.trace().re - 3.0).abs();
    c.residual(&mut r, "1rdm hermitian", Ok(herm), 1e-12);
    c.residual(&mut r, "1rdm trace", Ok(trace), 1e-10);

    let nat = natural_spectrum(&t);
    let rep = check_representability(&nat.lambdas, 1e-9);
    let margin = rep.equality_margins.iter().map(|m| m.abs()).fold(0.0, f64::max);
    c.residual(&mut r, "pair sums", Ok(margin), 1e-9);
    c.residual(&mut r, "pauli inequality", Ok((-rep.inequality_margin).max(0.0)), 1e-9);

    let bd = bd_expansion(&t);
    c.check(&mut r, "bd terms", bd.expansion.nonzero_terms() <= 8, format!("{} of at most 8", bd.expansion.nonzero_terms()));
    c.residual(&mut r, "bd reconstruction", Ok(bd.expansion.residual(&t)), 1e-9);
    c.residual(&mut r, "lone reconstruction", Ok(lone_orbital(&t).residual(&t)), 1e-8);

    let low = max_overlap_lowrank(&t);
    c.residual(&mut r, "lowrank overlap", Ok((low.overlap * low.overlap - nat.lambdas[0]).abs()), 1e-10);

    let slater = max_overlap_slater(&t, restarts, seed);
    c.residual(&mut r, "slater expansion", expansion_from_slater(&t, &slater).map(|e| e.residual(&t)), 1e-8);
    let cis = max_overlap_cis(&t, restarts, seed);
    c.residual(&mut r, "cis expansion", expansion_from_cis(&t, &cis).map(|e| e.residual(&t)), 1e-8);

    let inv = invariants(&t);
    let hd_zero = inv.hyperdet_mod2 <= 1e-9;
    let is_cis = cis.overlap >= 1.0 - MEMBER_TOL;
    c.check(
        &mut r,
        "hyperdet vs cis",
        hd_zero == is_cis,
        format!("|hyperdet|^2 {} / cis overlap {}", fmt_g(inv.hyperdet_mod2), fmt_g(cis.overlap)),
    );

    let u = haar_unitary(&mut rng_for(seed, 0));
    let moved = invariants(&t.transform(&u));
    let drift = [
        (moved.m1 - inv.m1).abs(),
        (moved.hyperdet_mod2 - inv.hyperdet_mod2).abs(),
        (moved.sym123[0] - inv.sym123[0]).abs(),
        (moved.sym123[1] - inv.sym123[1]).abs(),
        (moved.sym123[2] - inv.sym123[2]).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    c.residual(&mut r, "invariants under U(6)", Ok(drift), 1e-8);
    c.check(
        &mut r,
        "tags under U(6)",
        moved.type_tags == inv.type_tags && moved.rank == inv.rank,
        format!("rank {} / {}", inv.rank, moved.rank),
    );

    r.line(format!("{} of {} checks failed", c.failed, c.total));
    r.set("failed", json!(c.failed));
    r.print();
    Ok(if c.failed == 0 { 0 } else { 3 })
}

pub fn embed(path: &Path, output: Option<&Path>) -> Result<u8> {
    let q = load_qubits(path)?;
    let t = embed_state(&q);
    let mut file = StateFile::from_state(&t);
    file.metadata = Some(BTreeMap::from([("source".to_string(), "embed".to_string())]));
    let mut r = Report::new();
    r.line("amplitudes");
    report::amplitude_lines(&mut r, &t);
    if let Some(out) = output {
        save_state_file(&file, out)?;
        r.field("written", out.display().to_string());
    }
    r.set("state", json!(file));
    r.print();
    Ok(0)
}

pub fn unembed(path: &Path, output: Option<&Path>) -> Result<u8> {
    let mut r = Report::new();
    let t = load(path, &mut r)?;
    let pb = qubit_subspace(&t);
    let q = unembed_state(&t, &pb)?;
    r.field("pairing", format!("{:?}", pb.pairing.map(|(a, b)| (a + 1, b + 1))));
    r.line("amplitudes");
    for (n, a) in q.amps.iter().enumerate() {
        r.line(format!("  {:03b}   {}", n, fmt_complex(*a)));
    }
    if let Some(out) = output {
        save_qubits(&q, out)?;
        r.field("written", out.display().to_string());
    }
    r.set("qubits", json!(QubitFile::from_state(&q)));
    r.set("basis", report::matrix(pb.basis.matrix()));
    r.set("pairing", json!(pb.pairing.map(|(a, b)| [a + 1, b + 1])));
    r.print();
    Ok(0)
}
