//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any criterion fails.
//!
//! The NbO-type 3-coloring is checked with the literal generator `PQRQP`. Extra `info` lines show the
//! same checks with the rotation `PQPRQP`; they never affect the verdict.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use cubic_coloring::coloring::{
    build_coloring, color_action, color_group, stoichiometry, verify_theorem, ColorId, ColoringPlan, VertexColoring,
};
use cubic_coloring::config::Session;
use cubic_coloring::crystal::{preset, substitute, Preset};
use cubic_coloring::isometry::{check_presentation, dihedral_angle_check, parse_word_list, Realization};
use cubic_coloring::quotient::relative_index;
use cubic_coloring::{decompose, eval_word, index, stabilizer, TorusGroup, TorusSubgroup, TorusVertex, Vertex};

const G_WORDS: &str = "P Q R S";
const J_WORDS: &str = "Q R S PQP";
const H_LITERAL: &str = "Q R S PQRQP";
const H_CORRECTED: &str = "Q R S PQPRQP";
const H2_WORDS: &str = "Q R S (SRQPQR)^2";
const RADIUS: usize = 12;
const BUDGET: Duration = Duration::from_secs(5);

fn certified(g: &TorusGroup, words: &str) -> Result<TorusSubgroup, String> {
    let words = parse_word_list(words).map_err(|e| e.to_string())?;
    g.subgroup(&words).certify_translations(RADIUS).map_err(|e| e.to_string())
}

type Criterion = (&'static str, &'static str, fn() -> Result<Outcome, String>);

struct Outcome {
    passed: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
            info: Vec::new(),
        }
    }

    fn info(mut self, line: impl Into<String>) -> Self {
        self.info.push(line.into());
        self
    }
}

fn ac1() -> Result<Outcome, String> {
    let p = check_presentation(&Realization::standard());
    let d = dihedral_angle_check(&Realization::standard());
    let relators = p.relators.iter().filter(|r| r.passed).count();
    let angles: Vec<String> = d.angles.iter().map(|a| a.angle.to_string()).collect();
    Ok(Outcome::new(
        p.relators.len() == 10 && p.all_passed() && d.matches_expected,
        format!("{relators}/10 relators are the identity; angles {}", angles.join(" ")),
    ))
}

fn ac2() -> Result<Outcome, String> {
    let mut counts = Vec::new();
    for n in [2, 4] {
        let g = TorusGroup::build(n).map_err(|e| e.to_string())?;
        counts.push(decompose(&g.as_subgroup()).len());
    }
    Ok(Outcome::new(
        counts == [1, 1],
        format!("orbits of G: {} at N=2, {} at N=4", counts[0], counts[1]),
    ))
}

fn ac3() -> Result<Outcome, String> {
    let g = TorusGroup::build(2).map_err(|e| e.to_string())?;
    let x = Vertex::new(1, 1, 1);
    let order = stabilizer(&g.as_subgroup(), TorusVertex::reduce(x, 2)).order();
    let fixed: Vec<bool> = ["Q", "R", "PQRSRQP"]
        .iter()
        .map(|w| eval_word(&w.parse().unwrap()).apply(x) == x)
        .collect();
    Ok(Outcome::new(
        order == 48 && fixed.iter().all(|&f| f),
        format!("|Stab_G((1,1,1))| = {order}; Q, R, PQRSRQP fix (1,1,1) exactly: {fixed:?}"),
    ))
}

/// Index `[G : S]` at N=2 and N=4, certified at both.
fn stable_index(words: &str) -> Result<(usize, usize, bool), String> {
    let mut values = Vec::new();
    let mut exact = true;
    for n in [2, 4] {
        let g = TorusGroup::build(n).map_err(|e| e.to_string())?;
        let s = certified(&g, words)?;
        let i = index(&g, &s);
        exact &= i.exact && s.certificate().is_some_and(|c| c.verify());
        values.push(i.value);
    }
    Ok((values[0], values[1], exact))
}

fn stable_relative(sup: &str, sub: &str) -> Result<(usize, usize), String> {
    let mut values = Vec::new();
    for n in [2, 4] {
        let g = TorusGroup::build(n).map_err(|e| e.to_string())?;
        let i = relative_index(&certified(&g, sup)?, &certified(&g, sub)?).map_err(|e| e.to_string())?;
        values.push(i.value);
    }
    Ok((values[0], values[1]))
}

fn ac4() -> Result<Outcome, String> {
    let j = stable_index(J_WORDS)?;
    let h = stable_index(H_LITERAL)?;
    let rel = stable_relative(H_LITERAL, H2_WORDS)?;
    let clauses = [
        j.0 == 2 && j.1 == 2 && j.2,
        h.0 == 4 && h.1 == 4 && h.2,
        rel.0 == 2 && rel.1 == 2,
    ];
    let hc = stable_index(H_CORRECTED)?;
    let relc = stable_relative(H_CORRECTED, H2_WORDS)?;
    Ok(Outcome::new(
        clauses.iter().all(|&c| c),
        format!(
            "[G:<{J_WORDS}>] = {}/{} (want 2) {}; [G:<{H_LITERAL}>] = {}/{} (want 4) {}; \
             [<{H_LITERAL}>:<{H2_WORDS}>] = {}/{} (want 2) {}  (values at N=2/N=4)",
            j.0,
            j.1,
            verdict(clauses[0]),
            h.0,
            h.1,
            verdict(clauses[1]),
            rel.0,
            rel.1,
            verdict(clauses[2])
        ),
    )
    .info(format!(
        "corrected H = <{H_CORRECTED}>: [G:H] = {}/{}, [H:H2] = {}/{}, certified {}",
        hc.0, hc.1, relc.0, relc.1, hc.2
    )))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "WRONG"
    }
}

fn ac5() -> Result<Outcome, String> {
    let g = TorusGroup::build(2).map_err(|e| e.to_string())?;
    let h = decompose(&certified(&g, H_LITERAL)?).len();
    let h2 = decompose(&certified(&g, H2_WORDS)?).len();
    let hc = decompose(&certified(&g, H_CORRECTED)?).len();
    Ok(Outcome::new(h == 2 && h2 == 4, format!("{h} orbits under H, {h2} under H2"))
        .info(format!("corrected H has {hc} orbits")))
}

fn parity_coloring(g: &TorusGroup) -> Result<VertexColoring, String> {
    let plan = ColoringPlan::new(certified(g, G_WORDS)?)
        .orbit(0, certified(g, J_WORDS)?, &["light-blue", "white"])
        .anchored(TorusVertex::new(1, 1, 1, 2));
    build_coloring(&plan).map_err(|e| e.to_string())
}

fn ac6() -> Result<Outcome, String> {
    let g = TorusGroup::build(2).map_err(|e| e.to_string())?;
    let coloring = parity_coloring(&g)?;
    let cg = color_group(&coloring, &g);
    let perfect = cg.subgroup.elements() == g.elements();
    let mut actions = Vec::new();
    let mut ok = perfect;
    for (w, swaps) in [("P", true), ("Q", false), ("R", false), ("S", false)] {
        let sigma = color_action(&coloring, &g.project(&eval_word(&w.parse().unwrap())));
        let text = sigma.as_ref().map_or("undefined".to_string(), |s| s.cycles(&coloring));
        ok &= sigma.is_some_and(|s| s.is_identity() != swaps);
        actions.push(format!("{w} -> {text}"));
    }
    Ok(Outcome::new(
        ok,
        format!("color group order {} of {}; {}", cg.order(), g.order(), actions.join(", ")),
    ))
}

/// The 3-coloring plan on `H`: dark-blue/green on the orbit of (1,0,1) via J1, white on the orbit of (1,1,1).
fn three_coloring(g: &TorusGroup, h_words: &str) -> Result<(TorusSubgroup, TorusSubgroup, VertexColoring), String> {
    let h = certified(g, h_words)?;
    let j1 = certified(g, H2_WORDS)?;
    let d = decompose(&h);
    let x1 = TorusVertex::new(1, 0, 1, 2);
    let x2 = TorusVertex::new(1, 1, 1, 2);
    if d.orbit_of(x1) == d.orbit_of(x2) {
        return Err("(1,0,1) and (1,1,1) share an H-orbit".into());
    }
    let plan = ColoringPlan::new(h.clone())
        .orbit(d.orbit_of(x1), j1.clone(), &["dark-blue", "green"])
        .anchored(x1)
        .orbit(d.orbit_of(x2), h.clone(), &["white"])
        .anchored(x2)
        .background("white");
    let coloring = build_coloring(&plan).map_err(|e| format!("plan rejected: {e}"))?;
    Ok((h, j1, coloring))
}

fn three_coloring_checks(g: &TorusGroup, h: &TorusSubgroup, c: &VertexColoring) -> (bool, String) {
    let cg = color_group(c, g);
    let forward = cg.subgroup.elements().iter().all(|e| h.contains(e));
    let backward = h.elements().iter().all(|e| cg.subgroup.contains(e));
    let p_undefined = color_action(c, &g.project(&eval_word(&"P".parse().unwrap()))).is_none();
    (
        c.num_colors() == 3 && forward && backward && p_undefined,
        format!(
            "{} colors; color group within H {forward}, H within color group {backward}; P undefined {p_undefined}",
            c.num_colors()
        ),
    )
}

fn ac7() -> Result<Outcome, String> {
    let g = TorusGroup::build(2).map_err(|e| e.to_string())?;
    let literal = match three_coloring(&g, H_LITERAL) {
        Ok((h, _, c)) => three_coloring_checks(&g, &h, &c),
        Err(e) => (false, format!("H = <{H_LITERAL}>: {e}")),
    };
    let corrected = match three_coloring(&g, H_CORRECTED) {
        Ok((h, _, c)) => three_coloring_checks(&g, &h, &c).1,
        Err(e) => e,
    };
    Ok(Outcome::new(literal.0, literal.1).info(format!("corrected H: {corrected}")))
}

fn ac8() -> Result<Outcome, String> {
    let g = TorusGroup::build(2).map_err(|e| e.to_string())?;
    let one = parity_coloring(&g)?;
    let j = certified(&g, J_WORDS)?;
    let report = verify_theorem(&certified(&g, G_WORDS)?, &j, TorusVertex::new(1, 1, 1, 2), &one).map_err(|e| e.to_string())?;
    let four_b = report.part("4b").map_or(String::new(), |p| p.detail.clone());
    let ill1 = report.all_passed() && four_b == "|Hx| = 8 = 2 * 4";

    let run_two = |h_words: &str| -> Result<bool, String> {
        let (h, j1, c) = three_coloring(&g, h_words)?;
        let mut ok = true;
        for (j, x) in [(&j1, TorusVertex::new(1, 0, 1, 2)), (&h, TorusVertex::new(1, 1, 1, 2))] {
            ok &= verify_theorem(&h, j, x, &c).map_err(|e| e.to_string())?.all_passed();
        }
        Ok(ok)
    };
    let ill2 = run_two(H_LITERAL);
    let ill2_ok = matches!(ill2, Ok(true));
    let ill2_text = match &ill2 {
        Ok(ok) => format!("all parts {}", if *ok { "pass" } else { "do not pass" }),
        Err(e) => e.clone(),
    };
    let corrected = match run_two(H_CORRECTED) {
        Ok(ok) => format!("all parts {}", if ok { "pass" } else { "do not pass" }),
        Err(e) => e,
    };
    Ok(Outcome::new(
        ill1 && ill2_ok,
        format!("parity 2-coloring: {} ({four_b}); 3-coloring with literal H: {ill2_text}", verdict(ill1)),
    )
    .info(format!("3-coloring with corrected H: {corrected}")))
}

fn ac9() -> Result<Outcome, String> {
    let ratio = |p: Preset, labels: &[&str]| -> Result<Vec<u64>, String> {
        let m = preset(p).map_err(|e| e.to_string())?;
        let s = stoichiometry(&m.outcome.coloring, false);
        let counts: Vec<u64> = labels.iter().map(|l| s.count(l).unwrap_or(0) as u64).collect();
        Ok(cubic_coloring::coloring::reduce_ratio(&counts))
    };
    let d = ratio(Preset::ReO3, &["red", "orange"])?;
    let e = ratio(Preset::Perovskite, &["black", "yellow", "brown"])?;
    let b = ratio(Preset::RockSalt, &["light-blue", "white"])?;
    Ok(Outcome::new(
        d == [1, 3] && e == [1, 1, 3] && b == [1, 1],
        format!("ReO3 red:orange = {d:?}; perovskite black:yellow:brown = {e:?}; rock-salt = {b:?}"),
    ))
}

fn ac10() -> Result<Outcome, String> {
    let err = |e: cubic_coloring::crystal::CrystalError| e.to_string();
    let reo3 = preset(Preset::ReO3).map_err(err)?;
    let perov = preset(Preset::Perovskite).map_err(err)?;
    let salt = preset(Preset::RockSalt).map_err(err)?;
    let mut ok = reo3.formula.subscripts() == [1, 3] && perov.formula.subscripts() == [1, 1, 3];
    let mut made = Vec::new();
    for (a, b, want) in [("Ba", "Ti", "BaTiO₃"), ("Pb", "Zr", "PbZrO₃"), ("Pb", "Ti", "PbTiO₃")] {
        let s = substitute(&perov, &[("black", a), ("yellow", b), ("brown", "O")]).map_err(err)?;
        ok &= s.formula.unicode() == want && s.outcome.coloring.partition() == perov.outcome.coloring.partition();
        made.push(s.formula.unicode());
    }
    for (a, b, want) in [("Ag", "Cl", "AgCl"), ("Ca", "O", "CaO"), ("Na", "F", "NaF"), ("K", "Br", "KBr")] {
        let s = substitute(&salt, &[("light-blue", a), ("white", b)]).map_err(err)?;
        ok &= s.formula.to_string() == want && s.outcome.coloring.partition() == salt.outcome.coloring.partition();
        made.push(s.formula.to_string());
    }
    Ok(Outcome::new(
        ok,
        format!(
            "ReO3 subscripts {:?}, CaTiO3 subscripts {:?}; {} with unchanged vertex sets",
            reo3.formula.subscripts(),
            perov.formula.subscripts(),
            made.join(" ")
        ),
    ))
}

/// Every invariant of the quotient, orbit and coloring layers, recomputed by brute force at N=2.
fn ac11() -> Result<Outcome, String> {
    const N: i64 = 2;
    let g = TorusGroup::build(2).map_err(|e| e.to_string())?;
    let all = common::all_ops(N);
    let oracle_g = common::subgroup(G_WORDS, N);
    let lib_g: BTreeSet<common::Op> = g.elements().iter().map(common::from_element).collect();
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;
    let mut check = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            failures.push(what);
        }
    };
    check(all.len() == 384, "384 elements enumerated".into());
    check(
        oracle_g == all.iter().copied().collect::<BTreeSet<_>>() && lib_g == oracle_g,
        "G is all 384 elements".into(),
    );

    let mut runs: Vec<(String, Session)> = Vec::new();
    for p in Preset::ALL {
        runs.push((p.name().to_string(), p.session(2).map_err(|e| e.to_string())?));
    }
    for (name, session) in &runs {
        let words: BTreeMap<&String, String> = session
            .config
            .subgroups
            .iter()
            .map(|(k, v)| (k, v.join(" ")))
            .collect();
        let oracle_sub = |n: &str| common::subgroup(&words[&n.to_string()], N);
        for (sub_name, sub) in &session.subgroups {
            let oracle = oracle_sub(sub_name);
            let lib: BTreeSet<common::Op> = sub.elements().iter().map(common::from_element).collect();
            check(lib == oracle, format!("{name}: elements of {sub_name}"));
            check(384 % oracle.len() == 0, format!("{name}: Lagrange for {sub_name} in G"));
        }
        for outcome in session.run_all().map_err(|e| e.to_string())? {
            let h = oracle_sub(&outcome.group_name);
            let coloring = &outcome.coloring;
            let color = |v: [i64; 3]| coloring.color_of(TorusVertex::new(v[0] as u32, v[1] as u32, v[2] as u32, 2));
            let oracle_orbits = common::orbits(&h, N);
            let lib_orbits: Vec<BTreeSet<[i64; 3]>> = decompose(session.subgroup(&outcome.group_name).unwrap())
                .orbits()
                .iter()
                .map(|o| o.iter().map(|v| v.coords().map(i64::from)).collect())
                .collect();
            check(lib_orbits == oracle_orbits, format!("{name}: orbit partition"));
            for v in common::vertices(N) {
                let orbit = oracle_orbits.iter().find(|o| o.contains(&v)).unwrap();
                let stab = common::stabilizer(&h, v, N);
                check(orbit.len() * stab.len() == h.len(), format!("{name}: orbit-stabilizer at {v:?}"));
            }
            // Every element of H induces a well-defined permutation of the colors.
            for a in &h {
                let mut map: BTreeMap<ColorId, ColorId> = BTreeMap::new();
                let mut ok = true;
                for v in common::vertices(N) {
                    ok &= *map.entry(color(v)).or_insert(color(a.apply(v, N))) == color(a.apply(v, N));
                }
                let image: BTreeSet<ColorId> = map.values().copied().collect();
                check(ok && image.len() == map.len(), format!("{name}: {a:?} permutes colors"));
            }
            for planned in &outcome.orbits {
                let j = oracle_sub(&planned.subgroup_name);
                let x = planned.anchor.coords().map(i64::from);
                let cosets = common::left_cosets(&h, &j, N);
                check(h.len() == j.len() * cosets.len(), format!("{name}: Lagrange for J in H"));
                check(
                    common::stabilizer(&h, x, N).is_subset(&j),
                    format!("{name}: stabilizer of {x:?} inside J"),
                );
                // Coset hJ ↦ color of hJx: constant on cosets, injective, onto the orbit's colors.
                let mut coset_colors = Vec::new();
                for coset in cosets.values() {
                    let colors: BTreeSet<ColorId> = coset.iter().map(|a| color(a.apply(x, N))).collect();
                    check(colors.len() == 1, format!("{name}: coset color at {x:?}"));
                    coset_colors.extend(colors);
                }
                let distinct: BTreeSet<ColorId> = coset_colors.iter().copied().collect();
                let orbit = oracle_orbits.iter().find(|o| o.contains(&x)).unwrap();
                let on_orbit: BTreeSet<ColorId> = orbit.iter().map(|&v| color(v)).collect();
                check(
                    distinct.len() == coset_colors.len() && distinct == on_orbit,
                    format!("{name}: coset-color bijection at {x:?}"),
                );
                // The color classes on the orbit are exactly the sets hJx.
                let oracle_classes: BTreeSet<BTreeSet<[i64; 3]>> = cosets
                    .values()
                    .map(|c| c.iter().map(|a| a.apply(x, N)).collect())
                    .collect();
                let lib_classes: BTreeSet<BTreeSet<[i64; 3]>> = on_orbit
                    .iter()
                    .map(|&c| orbit.iter().copied().filter(|&v| color(v) == c).collect())
                    .collect();
                check(oracle_classes == lib_classes, format!("{name}: color classes at {x:?}"));
            }
        }
    }
    let total = checks;
    Ok(Outcome::new(
        failures.is_empty(),
        if failures.is_empty() {
            format!("{total} brute-force checks agree")
        } else {
            format!("{} of {total} checks disagree, first: {}", failures.len(), failures[0])
        },
    ))
}

fn run_cli(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_cubicolor"))
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}", out.status.code()));
    }
    Ok(out.stdout)
}

fn snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).map_err(|e| e.to_string())? {
        let entry = entry.map_err(|e| e.to_string())?;
        let bytes = std::fs::read(entry.path()).map_err(|e| e.to_string())?;
        files.insert(entry.file_name().to_string_lossy().into_owned(), bytes);
    }
    Ok(files)
}

fn ac12() -> Result<Outcome, String> {
    let presets = Path::new(env!("CARGO_MANIFEST_DIR")).join("presets");
    let mut configs: Vec<_> = std::fs::read_dir(&presets)
        .map_err(|e| e.to_string())?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    configs.sort();
    let mut runs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut stdout = Vec::new();
        for config in &configs {
            let config = config.to_str().unwrap();
            stdout.extend(run_cli(dir.path(), &["color", "--config", config])?);
            stdout.extend(run_cli(dir.path(), &["export", "--config", config])?);
        }
        runs.push((stdout, snapshot(dir.path())?));
    }
    let files = runs[0].1.len();
    Ok(Outcome::new(
        runs[0] == runs[1] && files > 0,
        format!("{} configs, {files} files and standard output byte-identical across two runs", configs.len()),
    ))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1", "presentation and dihedral angles", ac1),
        ("AC2", "vertex-transitivity", ac2),
        ("AC3", "stabilizer of (1,1,1)", ac3),
        ("AC4", "indices", ac4),
        ("AC5", "orbit counts", ac5),
        ("AC6", "parity 2-coloring is perfect", ac6),
        ("AC7", "NbO-type 3-coloring", ac7),
        ("AC8", "theorem verification", ac8),
        ("AC9", "stoichiometry", ac9),
        ("AC10", "crystal presets", ac10),
        ("AC11", "brute-force oracle at N=2", ac11),
        ("AC12", "determinism", ac12),
    ];
    println!("acceptance: exact arithmetic, zero tolerance, {}s budget per criterion", BUDGET.as_secs());
    let mut failed = 0;
    for (id, title, f) in criteria {
        let start = Instant::now();
        let outcome = f().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let passed = outcome.passed && elapsed < BUDGET;
        if !passed {
            failed += 1;
        }
        println!(
            "{id:<5} {}  {title}: {} [{} ms]",
            if passed { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_millis()
        );
        for line in outcome.info {
            println!("      info  {line}");
        }
    }
    println!("acceptance: {} passed, {failed} failed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
