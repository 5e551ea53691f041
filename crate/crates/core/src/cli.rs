//! Command dispatcher for the `blockfunctor` binary.
//!
//! Exit codes: 0 success, 1 usage or unreadable input, 2 parse error, 3 domain error,
//! 4 internal error or failed theorem check.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::chartab::character_table;
use crate::ddelta::{classify_into_registry, enumerate_pair_orbits, n_image_in_out, Registry};
use crate::error::{Error, Result};
use crate::fixtures::{self, Fixture};
use crate::fusion::{build_fusion, fusion_from_group, verify_bijection, FusionData};
use crate::groupfile::{parse_group_file, LoadedGroup};
use crate::multiplicity::{
    compare, invariants_kl, mult_table_fusion, mult_table_pairs, MultiplicityTable,
};
use crate::report::{Report, Table, MULT_COLUMNS};

#[derive(Parser, Debug)]
#[command(name = "blockfunctor", version, about = "Multiplicities of simple diagonal p-permutation functors for small groups")]
struct Cli {
    /// Emit JSON instead of TSV
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// k, l, k - l and the Sylow order
    Invariants { file: PathBuf },
    /// Orbit representatives of pairs (P, s) and their classes
    Pairs { file: PathBuf },
    /// Character table of the group, values mod q
    Chartab { file: PathBuf },
    /// Multiplicity table
    Mult {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Formula::Pairs)]
        formula: Formula,
    },
    /// Stable and functorial equivalence verdict for two groups
    Compare { left: PathBuf, right: PathBuf },
    /// Check the triple/pair orbit bijection and stabilizers class by class
    VerifyPsi { file: PathBuf },
    /// Run the built-in fixture battery
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Formula {
    Pairs,
    Fusion,
    Both,
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e);
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e);
                    1
                }
            }
        }
    };
    let result = dispatch(&cli.command);
    match result {
        Ok((report, code)) => {
            let text = if cli.json { report.to_json() } else { report.to_tsv() };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {}", msg);
            1
        }
        Err(Failure::Engine(e)) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}

fn dispatch(cmd: &Command) -> std::result::Result<(Report, i32), Failure> {
    Ok(match cmd {
        Command::Invariants { file } => (invariants_report(&load(file)?)?, 0),
        Command::Pairs { file } => (pairs_report(&load(file)?)?, 0),
        Command::Chartab { file } => (chartab_report(&load(file)?)?, 0),
        Command::Mult { file, formula } => (mult_report(&load(file)?, *formula)?, 0),
        Command::Compare { left, right } => (compare_report(&load(left)?, &load(right)?)?, 0),
        Command::VerifyPsi { file } => {
            let (r, ok) = verify_psi_report(&load(file)?)?;
            (r, if ok { 0 } else { 4 })
        }
        Command::Selftest => {
            let (r, ok) = selftest_report();
            (r, if ok { 0 } else { 4 })
        }
    })
}

fn load(path: &Path) -> std::result::Result<LoadedGroup, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {}", path.display(), e)))?;
    let spec = parse_group_file(&text).map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {}", path.display(), message),
        },
        other => other,
    })?;
    Ok(spec.load()?)
}

fn group_meta(r: &mut Report, g: &LoadedGroup) -> Result<()> {
    r.meta("group", g.name.as_str())
        .meta("degree", g.group.degree())
        .meta("order", g.group.order().to_string())
        .meta("prime", g.prime);
    Ok(())
}

/// Fusion data for a loaded group: the given kernel and complement for Frobenius files,
/// a normal Sylow subgroup and a searched complement otherwise.
pub fn fusion_for(g: &LoadedGroup) -> Result<FusionData> {
    match &g.frobenius {
        Some(f) => build_fusion(g.group.clone(), f.kernel.clone(), f.complement.clone(), g.prime),
        None => fusion_from_group(g.group.clone(), g.prime),
    }
}

pub fn invariants_report(g: &LoadedGroup) -> Result<Report> {
    let (k, l, d) = invariants_kl(&g.group, g.prime)?;
    let mut r = Report::new("invariants");
    group_meta(&mut r, g)?;
    let mut t = Table::new("invariants", &["k", "l", "k_minus_l", "defect_order"]);
    t.push(vec![json!(k), json!(l), json!(d), json!(g.group.sylow_order(g.prime)?)]);
    r.tables.push(t);
    Ok(r)
}

pub fn pairs_report(g: &LoadedGroup) -> Result<Report> {
    let mut reg = Registry::new();
    let cl = classify_into_registry(enumerate_pair_orbits(&g.group, g.prime)?, &mut reg)?;
    let mut r = Report::new("pairs");
    group_meta(&mut r, g)?;
    r.meta("pair_orbits", cl.members.len()).meta("classes", reg.len());
    let mut t = Table::new(
        "pairs",
        &[
            "orbit", "P_class", "P_order", "s", "s_order", "class_id", "L_order", "u_order",
            "out_order", "n_image_order",
        ],
    );
    for (i, m) in cl.members.iter().enumerate() {
        let cls = reg.class(m.class_id);
        t.push(vec![
            json!(i),
            json!(m.pair.subgroup_class),
            json!(m.pair.subgroup.size()?),
            json!(m.pair.s.to_string()),
            json!(m.pair.s.order()),
            json!(m.class_id),
            json!(cls.l_order()),
            json!(cls.u_order()),
            json!(cls.out_order()),
            json!(n_image_in_out(cls, m)?.size()?),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

pub fn chartab_report(g: &LoadedGroup) -> Result<Report> {
    let ct = character_table(&g.group)?;
    let mut r = Report::new("chartab");
    group_meta(&mut r, g)?;
    r.meta("modulus", ct.modulus());
    let mut classes = Table::new("classes", &["class", "representative", "size", "order"]);
    for (i, (rep, size)) in ct.class_representatives().iter().zip(ct.class_sizes()).enumerate() {
        classes.push(vec![json!(i), json!(rep.to_string()), json!(size), json!(rep.order())]);
    }
    let names: Vec<String> = (0..ct.len()).map(|i| format!("c{}", i)).collect();
    let mut cols = vec!["irr", "degree"];
    cols.extend(names.iter().map(String::as_str));
    let mut chars = Table::new("characters", &cols);
    for (i, row) in ct.values().iter().enumerate() {
        let mut cells = vec![json!(i), json!(ct.degrees()[i])];
        cells.extend(row.iter().map(|v| json!(v)));
        chars.push(cells);
    }
    r.tables.push(classes);
    r.tables.push(chars);
    Ok(r)
}

fn table_meta(r: &mut Report, t: &MultiplicityTable) {
    r.meta("k", t.k)
        .meta("l", t.l)
        .meta("k_minus_l", t.k - t.l)
        .meta("defect_order", t.defect_order)
        .meta("single_block", t.single_block);
    if !t.single_block {
        r.meta(
            "note",
            "single-block regime not established: C_G(O_p(G)) is not contained in O_p(G), \
             so multiplicities describe the whole group algebra rather than one block",
        );
    }
}

fn mult_rows(t: &MultiplicityTable) -> Table {
    let mut out = Table::new("multiplicities", &MULT_COLUMNS);
    for (&(c, i), &m) in &t.rows {
        let s = &t.classes[&c];
        out.push(vec![
            json!(c),
            json!(s.l_order),
            json!(s.u_order),
            json!(s.out_order),
            json!(i),
            json!(s.irr_degrees[i]),
            json!(m),
        ]);
    }
    out
}

pub fn mult_report(g: &LoadedGroup, formula: Formula) -> Result<Report> {
    let mut reg = Registry::new();
    let mut r = Report::new("mult");
    group_meta(&mut r, g)?;
    let table = match formula {
        Formula::Pairs => mult_table_pairs(&g.name, &g.group, g.prime, &mut reg)?,
        Formula::Fusion => mult_table_fusion(&g.name, &fusion_for(g)?, &mut reg)?,
        Formula::Both => {
            let tp = mult_table_pairs(&g.name, &g.group, g.prime, &mut reg)?;
            let tf = mult_table_fusion(&g.name, &fusion_for(g)?, &mut reg)?;
            cross_check(&tp, &tf)?;
            tp
        }
    };
    r.meta(
        "formula",
        match formula {
            Formula::Pairs => "pairs",
            Formula::Fusion => "fusion",
            Formula::Both => "both",
        },
    );
    table_meta(&mut r, &table);
    if formula == Formula::Both {
        r.meta("cross_check", "pass");
    }
    r.tables.push(mult_rows(&table));
    Ok(r)
}

/// Row-by-row equality of the two formulas on `L != 1`.
pub fn cross_check(pairs: &MultiplicityTable, fusion: &MultiplicityTable) -> Result<()> {
    let (a, b) = (pairs.nontrivial_rows(), fusion.rows.clone());
    if a == b {
        return Ok(());
    }
    let keys: BTreeSet<_> = a.keys().chain(b.keys()).collect();
    let bad: Vec<String> = keys
        .into_iter()
        .filter(|k| a.get(k) != b.get(k))
        .map(|k| {
            format!(
                "(class {}, irr {}): pairs {} vs fusion {}",
                k.0,
                k.1,
                a.get(k).copied().unwrap_or(0),
                b.get(k).copied().unwrap_or(0)
            )
        })
        .collect();
    Err(Error::TheoremViolation(format!(
        "multiplicity formulas disagree on {}",
        bad.join("; ")
    )))
}

pub fn compare_report(a: &LoadedGroup, b: &LoadedGroup) -> Result<Report> {
    if a.prime != b.prime {
        return Err(Error::Hypothesis(format!(
            "inputs use different primes {} and {}",
            a.prime, b.prime
        )));
    }
    let mut reg = Registry::new();
    let ta = mult_table_pairs(&a.name, &a.group, a.prime, &mut reg)?;
    let tb = mult_table_pairs(&b.name, &b.group, b.prime, &mut reg)?;
    let v = compare(&ta, &tb)?;
    let mut r = Report::new("compare");
    r.meta("prime", a.prime)
        .meta("left", a.name.as_str())
        .meta("right", b.name.as_str())
        .meta("left_order", a.group.order().to_string())
        .meta("right_order", b.group.order().to_string())
        .meta("left_k", ta.k)
        .meta("left_l", ta.l)
        .meta("right_k", tb.k)
        .meta("right_l", tb.l)
        .meta("stable", v.stable)
        .meta("functorial", v.functorial)
        .meta("defect_isomorphic", v.defect_isomorphic);
    for (side, t) in [("left", &ta), ("right", &tb)] {
        if !t.single_block {
            r.meta(
                &format!("{}_note", side),
                "single-block regime not established for this input",
            );
        }
    }
    let mut cols = MULT_COLUMNS[..6].to_vec();
    cols.extend(["left", "right"]);
    let mut diff = Table::new("diff", &cols);
    for d in &v.diff {
        let s = ta.classes.get(&d.class_id).or_else(|| tb.classes.get(&d.class_id)).expect("row has a class");
        diff.push(vec![
            json!(d.class_id),
            json!(s.l_order),
            json!(s.u_order),
            json!(s.out_order),
            json!(d.irr),
            json!(s.irr_degrees[d.irr]),
            json!(d.left),
            json!(d.right),
        ]);
    }
    r.tables.push(diff);
    Ok(r)
}

/// Per-class bijection and stabilizer checks; the flag is false if any class fails.
pub fn verify_psi_report(g: &LoadedGroup) -> Result<(Report, bool)> {
    let f = fusion_for(g)?;
    let mut reg = Registry::new();
    let cl = classify_into_registry(enumerate_pair_orbits(&g.group, g.prime)?, &mut reg)?;
    let tf = mult_table_fusion(&g.name, &f, &mut reg)?;
    let mut ids: BTreeSet<usize> = cl.class_ids().into_iter().collect();
    ids.extend(tf.classes.keys());
    let mut r = Report::new("verify-psi");
    group_meta(&mut r, g)?;
    r.meta("defect_order", f.defect.size()?)
        .meta("complement_order", f.complement.size()?);
    let mut t = Table::new(
        "classes",
        &[
            "class_id", "L_order", "u_order", "out_order", "triple_orbits", "pair_orbits",
            "stabilizer_orders", "status", "detail",
        ],
    );
    let mut ok = true;
    for id in ids {
        let cls = reg.class(id);
        if cls.l_order() == 1 {
            continue;
        }
        let head = vec![json!(id), json!(cls.l_order()), json!(cls.u_order()), json!(cls.out_order())];
        let tail = match verify_bijection(&f, cls, &cl) {
            Ok(rep) => {
                let stabs: Vec<String> =
                    rep.matched.iter().map(|m| m.stabilizer_order.to_string()).collect();
                vec![
                    json!(rep.triple_orbits),
                    json!(rep.pair_orbits),
                    json!(stabs.join(",")),
                    json!("PASS"),
                    Value::Null,
                ]
            }
            Err(Error::TheoremViolation(msg)) => {
                ok = false;
                let pairs = cl.members_of(id).count();
                vec![Value::Null, json!(pairs), Value::Null, json!("FAIL"), json!(msg)]
            }
            Err(e) => return Err(e),
        };
        t.push(head.into_iter().chain(tail).collect());
    }
    r.tables.push(t);
    Ok((r, ok))
}

fn check(t: &mut Table, fixture: &str, prime: u64, name: &str, result: Result<Option<String>>) -> bool {
    let (status, detail) = match result {
        Ok(None) => ("PASS", Value::Null),
        Ok(Some(msg)) => ("FAIL", json!(msg)),
        Err(e) => ("FAIL", json!(e.to_string())),
    };
    t.push(vec![json!(fixture), json!(prime), json!(name), json!(status), detail]);
    status == "PASS"
}

fn selftest_fixture(t: &mut Table, fx: &Fixture) -> bool {
    let g = match fx.load() {
        Ok(g) => g,
        Err(e) => return check(t, fx.file, 0, "load", Err(e)),
    };
    let mut ok = true;
    let mut reg = Registry::new();
    let tp = mult_table_pairs(&g.name, &g.group, g.prime, &mut reg);
    ok &= check(
        t,
        fx.file,
        g.prime,
        "l_row",
        tp.as_ref().map_err(Clone::clone).map(|tp| {
            (tp.trivial_row() != tp.l as u64)
                .then(|| format!("m(1,1;triv) = {} but l = {}", tp.trivial_row(), tp.l))
        }),
    );
    if fx.frobenius {
        let cross = tp.as_ref().map_err(Clone::clone).and_then(|tp| {
            let tf = mult_table_fusion(&g.name, &fusion_for(&g)?, &mut reg)?;
            cross_check(tp, &tf).map(|_| None)
        });
        ok &= check(t, fx.file, g.prime, "cross_formula", cross);
        let psi = verify_psi_report(&g).map(|(_, pass)| (!pass).then(|| "a class failed".to_string()));
        ok &= check(t, fx.file, g.prime, "verify_psi", psi);
    } else {
        let rejected = match fusion_for(&g) {
            Ok(_) => Ok(Some("fusion hypotheses unexpectedly accepted".to_string())),
            Err(e) if e.exit_code() == 3 => Ok(None),
            Err(e) => Ok(Some(format!("rejected with exit {}: {}", e.exit_code(), e))),
        };
        ok &= check(t, fx.file, g.prime, "fusion_rejected", rejected);
        let block = tp
            .as_ref()
            .map_err(Clone::clone)
            .map(|tp| (!tp.single_block).then(|| "single-block caveat present".to_string()));
        ok &= check(t, fx.file, g.prime, "pairs_single_block", block);
    }
    ok
}

fn selftest_relabeled(t: &mut Table, a: &Fixture, b: &Fixture) -> bool {
    let result = (|| {
        let (ga, gb) = (a.load()?, b.load()?);
        let mut reg = Registry::new();
        let ta = mult_table_pairs(&ga.name, &ga.group, ga.prime, &mut reg)?;
        let tb = mult_table_pairs(&gb.name, &gb.group, gb.prime, &mut reg)?;
        let v = compare(&ta, &tb)?;
        Ok((!(v.stable && v.functorial && v.defect_isomorphic))
            .then(|| format!("verdict {:?}", v)))
    })();
    check(t, &format!("{}~{}", a.file, b.file), 0, "relabel_invariance", result)
}

/// Runs the fixture battery; the flag is false if any check fails.
pub fn selftest_report() -> (Report, bool) {
    let mut t = Table::new("checks", &["fixture", "prime", "check", "status", "detail"]);
    let mut ok = true;
    for fx in &fixtures::BATTERY {
        ok &= selftest_fixture(&mut t, fx);
    }
    ok &= selftest_relabeled(&mut t, &fixtures::BATTERY[0], &fixtures::RELABELED[0]);
    ok &= selftest_relabeled(&mut t, &fixtures::BATTERY[2], &fixtures::RELABELED[1]);
    let mut r = Report::new("selftest");
    r.meta("checks", t.rows.len()).meta("passed", ok);
    r.tables.push(t);
    (r, ok)
}

/// Loads a group from text, for callers that do not go through files.
pub fn load_text(text: &str) -> Result<LoadedGroup> {
    parse_group_file(text)?.load()
}
