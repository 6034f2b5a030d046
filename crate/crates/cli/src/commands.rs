use std::fs;
use std::path::{Path, PathBuf};

use fpc_core::ising::SPIN_CAP;
use fpc_core::product::kunneth_check_product;
use fpc_core::{
    barrier_closed_form, binder_crossing, build_perforated_lattice, closed_form_counts,
    code_from_complex, constraint_group, duality_identity_check_with, energy_barrier_cut,
    fpc_closed_form, fpc_z_constraints, merlini_gruber_dual, min_vertical_cut, read_csv,
    run_schedule, sector_model, sectors_are_isomorphic, write_csv, Algorithm,
    CarpetGraph, CarpetSpec, ConstraintGroup, CssCode, DualityCheck, Error, Fpc, IsingModel,
    LatticeGraph, ModelFile, PerforatedLatticeSpec, Schedule, Sector,
};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::fail::{Failure, Outcome};
use crate::manifest::{manifest_path, sha256_file, RunManifest};

/// Materialized codes above this many qubits need `--force`.
pub const QUBIT_GATE: u64 = 50_000;

/// Files a command wrote, and a failure to report once the manifest is out.
#[derive(Debug, Default)]
pub struct Run {
    pub outputs: Vec<PathBuf>,
    pub failure: Option<Failure>,
}

impl Run {
    fn fail_if(mut self, bad: bool, f: impl FnOnce() -> Failure) -> Self {
        if bad {
            self.failure = Some(f());
        }
        self
    }
}

/// Runs `cmd` and writes its manifest beside the outputs.
pub fn execute(mut cmd: Command) -> Outcome<()> {
    cmd.absolutize()?;
    let run = dispatch(&cmd)?;
    if let Some(primary) = cmd.primary_output() {
        if !run.outputs.is_empty() {
            RunManifest::new(&cmd, &run.outputs)?.write(&manifest_path(primary))?;
        }
    }
    run.failure.map_or(Ok(()), Err)
}

pub fn dispatch(cmd: &Command) -> Outcome<Run> {
    match cmd {
        Command::BuildGraph(a) => build_graph(a),
        Command::CodeParams(a) => code_params(a),
        Command::Verify(a) => verify(a),
        Command::Dualize(a) => dualize(a),
        Command::Sector(a) => sector(a),
        Command::Simulate(a) => simulate(a),
        Command::Barrier(a) => barrier(a),
        Command::Crossing(a) => crossing(a),
        Command::Replay(a) => replay(a),
    }
}

fn big(n: &BigUint) -> Value {
    match u64::try_from(n) {
        Ok(v) => json!(v),
        Err(_) => json!(n.to_string()),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn gate(spec: &CarpetSpec, force: bool) -> Outcome<()> {
    let (n, _) = fpc_closed_form(spec);
    if !force && n > BigUint::from(QUBIT_GATE) {
        return Err(Failure::gate(format!(
            "FPC({},{},{}) has {n} qubits, above the {QUBIT_GATE}-qubit limit; pass --force to build it anyway",
            spec.b, spec.c, spec.level
        )));
    }
    Ok(())
}

fn provenance(spec: &CarpetSpec) -> String {
    format!("FPC({},{},{})", spec.b, spec.c, spec.level)
}

fn build_graph(a: &BuildGraphArgs) -> Outcome<Run> {
    let g = CarpetGraph::build(&a.carpet.spec()?);
    write_json(&a.out, &g.to_json())?;
    println!(
        "SC({},{},{}): {} vertices, {} edges, {} interior and {} exterior plaquettes",
        a.carpet.b,
        a.carpet.c,
        a.carpet.level,
        g.vertices.len(),
        g.edges.len(),
        g.interior_plaquettes.len(),
        g.exterior_plaquettes.len()
    );
    Ok(Run { outputs: vec![a.out.clone()], failure: None })
}

fn code_params(a: &CodeParamsArgs) -> Outcome<Run> {
    let spec = a.carpet.spec()?;
    let (n, k) = fpc_closed_form(&spec);
    println!("{}: n = {n}, k = {k}", provenance(&spec));
    let mut report = json!({
        "b": spec.b, "c": spec.c, "l": spec.level,
        "n": big(&n), "k": big(&k),
        "k_ranks": null, "agree": null,
    });
    let mut run = Run::default();
    if a.formula_only {
        if a.export_matrix.is_some() {
            return Err(Failure::args("--export-matrix needs the built code, drop --formula-only"));
        }
    } else {
        gate(&spec, a.force)?;
        let fpc = Fpc::build(&spec)?;
        let code = code_from_complex(&fpc.middle(), provenance(&spec))?;
        let k_ranks = code.num_logical_qubits();
        let agree = BigUint::from(k_ranks) == k;
        println!(
            "k from ranks = {k_ranks} ({})",
            if agree { "agrees" } else { "DISAGREES" }
        );
        report["k_ranks"] = json!(k_ranks);
        report["agree"] = json!(agree);
        if let Some(dir) = &a.export_matrix {
            code.write(dir, None)?;
            run.outputs.extend(["code.json", "hx.txt", "hz.txt"].map(|f| dir.join(f)));
        }
        run = run.fail_if(!agree, || {
            Failure::invariant(format!("k from ranks is {k_ranks}, closed form gives {k}"))
        });
    }
    if let Some(out) = &a.out {
        write_json(out, &report)?;
        run.outputs.insert(0, out.clone());
    }
    Ok(run)
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

/// Turns invariant errors into failed checks and passes others through.
fn checked(name: &'static str, r: fpc_core::Result<String>) -> Outcome<Check> {
    match r {
        Ok(detail) => Ok(check(name, true, detail)),
        Err(
            e @ (Error::NonCommuting
            | Error::BoundaryNotClosed(_)
            | Error::Invariant(_)
            | Error::NotAProduct(_)),
        ) => Ok(check(name, false, e.to_string())),
        Err(e) => Err(e.into()),
    }
}

fn fpc_checks(spec: &CarpetSpec) -> Outcome<Vec<Check>> {
    let mut checks = Vec::new();
    let fpc = Fpc::build(spec)?;
    let g = &fpc.graph;
    let counts = closed_form_counts(spec).as_u64();
    let built = (
        g.vertices.len() as u64,
        g.edges.len() as u64,
        g.interior_plaquettes.len() as u64,
        g.exterior_plaquettes.len() as u64,
    );
    checks.push(check(
        "carpet counts",
        counts == Some(built),
        format!("(|V|, |E|, |P_i|, |P_e|) = {built:?}"),
    ));
    let p_e = built.3 as usize;

    checks.push(checked("boundary squares to zero", (|| {
        fpc.toric.check_closed()?;
        fpc.dual.check_closed()?;
        fpc.product.complex.check_closed()?;
        Ok("toric, dual and product complexes".to_string())
    })())?);

    let chi = (
        fpc.toric.euler_characteristic(),
        fpc.dual.euler_characteristic(),
        fpc.product.complex.euler_characteristic(),
    );
    let cells = built.0 as i64 - built.1 as i64 + built.2 as i64;
    checks.push(check(
        "euler characteristic",
        chi.2 == chi.0 * chi.1 && chi.0 == cells,
        format!("χ(𝒯) = {}, χ(𝒯*) = {}, χ(𝒯⊗𝒯*) = {}", chi.0, chi.1, chi.2),
    ));

    let h = |c: &fpc_core::ChainComplex| -> Outcome<Vec<usize>> {
        (0..=2).map(|i| Ok(c.homology_dim(i)?)).collect()
    };
    let (ht, hd) = (h(&fpc.toric)?, h(&fpc.dual)?);
    checks.push(check(
        "toric homology",
        ht == [1, p_e, 0] && hd == [0, p_e, 1],
        format!("H(𝒯) = {ht:?}, H(𝒯*) = {hd:?}"),
    ));

    let kunneth: Vec<_> = (0..=4)
        .map(|i| kunneth_check_product(&fpc.product, &fpc.toric, &fpc.dual, i))
        .collect::<fpc_core::Result<_>>()?;
    checks.push(check(
        "kunneth",
        kunneth.iter().all(|c| c.equal),
        format!("{:?}", kunneth.iter().map(|c| (c.lhs, c.rhs)).collect::<Vec<_>>()),
    ));

    match code_from_complex(&fpc.middle(), provenance(spec)) {
        Ok(code) => {
            checks.push(check("stabilizers commute", true, format!("n = {}", code.n)));
            let k = code.num_logical_qubits();
            checks.push(check(
                "degeneracy",
                k == 1 + p_e * p_e,
                format!("k = {k}, 1 + |P_e|² = {}", 1 + p_e * p_e),
            ));
            checks.push(checked(
                "sector isomorphism",
                sectors_are_isomorphic(&code, &fpc.product)
                    .and_then(|same| match same {
                        true => Ok("X and Z supports agree after the factor swap".to_string()),
                        false => Err(Error::Invariant("X and Z supports differ".into())),
                    }),
            )?);
        }
        Err(e) => checks.push(checked("stabilizers commute", Err(e))?),
    }
    Ok(checks)
}

fn stored_code_checks(dir: &Path) -> Outcome<Vec<Check>> {
    match CssCode::read(dir) {
        Ok((code, file)) => {
            let k = code.num_logical_qubits();
            Ok(vec![
                check("stabilizers commute", true, format!("n = {}", code.n)),
                check(
                    "logical count",
                    k == file.k,
                    format!("ranks give k = {k}, code.json records {}", file.k),
                ),
            ])
        }
        Err(e) => Ok(vec![checked("stabilizers commute", Err(e))?]),
    }
}

fn verify(a: &VerifyArgs) -> Outcome<Run> {
    let checks = match (&a.code_dir, a.b, a.c) {
        (Some(dir), _, _) => stored_code_checks(dir)?,
        (None, Some(b), Some(c)) => {
            let spec = CarpetSpec::new(b, c, a.level)?;
            gate(&spec, a.force)?;
            fpc_checks(&spec)?
        }
        _ => return Err(Failure::args("give --b and --c, or --code-dir")),
    };
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", c.name, c.detail);
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let mut run = Run::default();
    if let Some(out) = &a.out {
        write_json(out, &json!({ "passed": failed.is_empty(), "checks": checks }))?;
        run.outputs.push(out.clone());
    }
    Ok(run.fail_if(!failed.is_empty(), || {
        Failure::invariant(format!("failed: {}", failed.join(", ")))
    }))
}

#[derive(Debug, Serialize)]
struct DualFile {
    #[serde(flatten)]
    model: IsingModel,
    phi: Vec<Vec<usize>>,
    constant: f64,
    num_spins: usize,
    num_dual_spins: usize,
    n_s: usize,
    n_s_star: usize,
    trivial: bool,
    max_arity: usize,
    identity: Option<DualityCheck>,
}

/// Largest relative error accepted between the two sides of the identity.
const IDENTITY_TOLERANCE: f64 = 1e-9;

fn dualize(a: &DualizeArgs) -> Outcome<Run> {
    let text = fs::read_to_string(&a.model)
        .map_err(|e| Failure::args(format!("{}: {e}", a.model.display())))?;
    let file: ModelFile = serde_json::from_str(&text)?;
    let m = file.model;
    let generators = match file.constraints {
        Some(g) => ConstraintGroup::from_generators(&m, g)?,
        None => constraint_group(&m),
    };
    let dual = merlini_gruber_dual(&m, &generators)?;
    let identity = if m.spins <= SPIN_CAP && dual.num_dual_spins <= SPIN_CAP {
        Some(duality_identity_check_with(&m, &generators)?)
    } else {
        None
    };
    println!(
        "dual: {} spins, {} interactions, max arity {}, N_S = {}, N_S* = {}{}",
        dual.num_dual_spins,
        dual.dual_model.num_interactions(),
        dual.dual_model.max_support(),
        dual.n_s,
        dual.n_s_star,
        if dual.trivial { " (trivial constraint group)" } else { "" }
    );
    match &identity {
        Some(c) => println!("identity relative error = {:e}", c.relative_error),
        None => println!("identity not evaluated: above the {SPIN_CAP}-spin enumeration cap"),
    }
    let bad = identity.as_ref().map(|c| c.relative_error).filter(|&e| !(e <= IDENTITY_TOLERANCE));
    let out = DualFile {
        max_arity: dual.dual_model.max_support(),
        model: dual.dual_model,
        phi: dual.phi,
        constant: dual.constant,
        num_spins: dual.num_spins,
        num_dual_spins: dual.num_dual_spins,
        n_s: dual.n_s,
        n_s_star: dual.n_s_star,
        trivial: dual.trivial,
        identity,
    };
    write_json(&a.out, &out)?;
    Ok(Run { outputs: vec![a.out.clone()], failure: None }.fail_if(bad.is_some(), || {
        Failure::invariant(format!(
            "duality identity off by {:e}, above {IDENTITY_TOLERANCE:e}",
            bad.unwrap_or(f64::NAN)
        ))
    }))
}

fn sector(a: &SectorArgs) -> Outcome<Run> {
    let spec = a.carpet.spec()?;
    if !(a.beta > 0.0 && a.beta.is_finite()) {
        return Err(Failure::args(format!("beta must be positive, got {}", a.beta)));
    }
    gate(&spec, a.force)?;
    let fpc = Fpc::build(&spec)?;
    let code = code_from_complex(&fpc.middle(), provenance(&spec))?;
    let sector = Sector::from(a.sector);
    let model = sector_model(&code, sector, a.beta)?;
    let constraints = match sector {
        Sector::Z => Some(fpc_z_constraints(&fpc)?.generators),
        Sector::X => None,
    };
    println!(
        "{} {:?} sector: {} spins, {} interactions of arity ≤ {}",
        provenance(&spec),
        sector,
        model.spins,
        model.num_interactions(),
        model.max_support()
    );
    write_json(&a.out, &ModelFile { model, constraints })?;
    Ok(Run { outputs: vec![a.out.clone()], failure: None })
}

fn simulation_model(s: &SourceArgs) -> Outcome<IsingModel> {
    if let Some(path) = &s.model {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::args(format!("{}: {e}", path.display())))?;
        return Ok(serde_json::from_str::<ModelFile>(&text)?.model);
    }
    let graph = if let Some((b, c, l)) = s.carpet {
        LatticeGraph::from(&CarpetGraph::build(&CarpetSpec::new(b, c, l)?))
    } else if let Some(side) = s.square {
        if side < 2 {
            return Err(Failure::args("square lattice needs L ≥ 2"));
        }
        LatticeGraph::square(side, true)
    } else if let Some((size, alpha, beta)) = s.perforated {
        build_perforated_lattice(PerforatedLatticeSpec { size, alpha, beta }).graph
    } else {
        return Err(Failure::args("no model source given"));
    };
    Ok(IsingModel::from_graph(&graph, 1.0)?)
}

/// `<dir>/<stem>.r<r>.<ext>` for an output `<dir>/<stem>.<ext>`.
pub fn replica_path(out: &Path, r: usize) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.r{r}.{}", ext.to_string_lossy()),
        None => format!("{stem}.r{r}"),
    };
    out.with_file_name(name)
}

fn simulate(a: &SimulateArgs) -> Outcome<Run> {
    let m = simulation_model(&a.source)?;
    let algorithm = match a.algorithm {
        Some(alg) => alg.into(),
        None if m.is_two_body() => Algorithm::Wolff,
        None => Algorithm::Metropolis,
    };
    let sch = Schedule {
        betas: a
            .betas
            .clone()
            .unwrap_or_else(|| Schedule::linspace(a.beta_min, a.beta_max, a.points)),
        sweeps: a.sweeps,
        burn_in: a.burn_in,
        stride: a.stride,
        replicas: a.replicas,
        seed: a.seed,
        algorithm,
        blocks: a.blocks,
    };
    let result = run_schedule(&m, &sch)?;
    if let Some(dir) = a.out.parent() {
        fs::create_dir_all(dir)?;
    }
    write_csv(&a.out, &result.aggregated)?;
    let mut outputs = vec![a.out.clone()];
    for (r, records) in result.replicas.iter().enumerate() {
        let p = replica_path(&a.out, r);
        write_csv(&p, records)?;
        outputs.push(p);
    }
    println!(
        "{} spins, {} β points, {:?}, {} replica(s) -> {}",
        m.spins,
        sch.betas.len(),
        algorithm,
        sch.replicas,
        a.out.display()
    );
    Ok(Run { outputs, failure: None })
}

fn barrier(a: &BarrierArgs) -> Outcome<Run> {
    let spec = a.carpet.spec()?;
    let g = CarpetGraph::build(&spec);
    let central = energy_barrier_cut(&g);
    let min = min_vertical_cut(&g);
    let closed = barrier_closed_form(&spec);
    println!("central cut crosses {} bonds, fewest over vertical cuts {}", central.count, min.count);
    match &closed {
        Some(n) => println!("closed form {n}"),
        None => println!("even b: no closed form, the cut count is heuristic"),
    }
    let mismatch = closed.as_ref().is_some_and(|n| {
        *n != BigUint::from(central.count) || *n != BigUint::from(min.count)
    });
    let mut run = Run::default();
    if let Some(out) = &a.out {
        write_json(
            out,
            &json!({
                "b": spec.b, "c": spec.c, "l": spec.level,
                "closed_form": closed.as_ref().map(big),
                "central_cut": central.count,
                "central_column": central.column,
                "min_vertical_cut": min.count,
                "heuristic": central.heuristic,
            }),
        )?;
        run.outputs.push(out.clone());
    }
    Ok(run.fail_if(mismatch, || {
        Failure::invariant("cut counts disagree with the closed form")
    }))
}

fn crossing(a: &CrossingArgs) -> Outcome<Run> {
    let c = binder_crossing(&read_csv(&a.small)?, &read_csv(&a.large)?)?;
    match (c.beta, c.uncertainty) {
        (Some(b), Some(u)) => println!("Binder crossing at β = {b:.6} ± {u:.6}"),
        (Some(b), None) if c.degenerate => println!("curves coincide; midpoint β = {b:.6}"),
        (Some(b), None) => println!("Binder crossing at β = {b:.6}"),
        (None, _) => println!("no crossing on the common grid"),
    }
    let mut run = Run::default();
    if let Some(out) = &a.out {
        write_json(out, &c)?;
        run.outputs.push(out.clone());
    }
    Ok(run)
}

fn replay(a: &ReplayArgs) -> Outcome<Run> {
    let manifest = RunManifest::read(&a.manifest)?;
    let dir = match &a.into {
        Some(d) => d.clone(),
        None => a
            .manifest
            .parent()
            .map(|p| p.join("replay"))
            .unwrap_or_else(|| PathBuf::from("replay")),
    };
    fs::create_dir_all(&dir)?;
    let mut cmd = manifest.params.clone();
    cmd.retarget(&dir)?;
    let run = dispatch(&cmd)?;
    if let Some(primary) = cmd.primary_output() {
        RunManifest::new(&cmd, &run.outputs)?.write(&manifest_path(primary))?;
    }
    let mut differ = Vec::new();
    if run.outputs.len() != manifest.outputs.len() {
        differ.push(format!(
            "{} outputs recorded, {} regenerated",
            manifest.outputs.len(),
            run.outputs.len()
        ));
    }
    for (old, new) in manifest.outputs.iter().zip(&run.outputs) {
        let same = sha256_file(new)? == old.sha256;
        println!("{} {}", if same { "MATCH " } else { "DIFFER" }, new.display());
        if !same {
            differ.push(new.display().to_string());
        }
    }
    if differ.is_empty() {
        Ok(Run { outputs: Vec::new(), failure: run.failure })
    } else {
        Err(Failure::invariant(format!("replay differs: {}", differ.join(", "))))
    }
}
