//! Subcommand implementations. Each returns the text to print.

use std::fs;

use bhcount::asymptotics::predict_with_constant;
use bhcount::bhconstant::{
    ap_constant, ap_family_constant, bh_constant_with, ck_constant, greentao_constant,
    hlf_constant, CheckpointSchedule, ConstantOptions,
};
use bhcount::census::{
    brun_partial, count_ap, count_landau, count_pairs, count_q_with, count_sophie,
    cunningham_chains, illiac_count, with_constant, ChainKind, CountOptions, CountReport, PairMode,
};
use bhcount::eulersearch::{
    build_plan, euler_streak, published_k100_nonresidues, verify_plan, NonresidueRule,
    PrimeSelection, Representative,
};
use bhcount::polynomial::{check_family, parse_family, IntPoly, PolyFamily};
use bhcount::ulam::{ray_report, render_spiral, spiral_value, RaySpec, DEFAULT_PIXEL_BUDGET};
use bhcount::Error;
use num_bigint::BigInt;
use serde_json::json;

use crate::output::{sig, Emit, Format, Sheet};
use crate::tables::{self, TableId};
use crate::{
    ChainArg, Cli, CliError, Command, ConstantArgs, CountArgs, EulerArgs, Form, RuleArg,
    TablesArgs, UlamArgs, MAX_PRIME_BOUND, MAX_X, MEMORY_ENV,
};

type Result<T> = std::result::Result<T, CliError>;

/// Digits printed for constants in table and CSV output.
const CONSTANT_DIGITS: u32 = 6;

pub fn run(cli: &Cli) -> Result<String> {
    let caps = Caps {
        allow_large: cli.allow_large,
    };
    let emit = match &cli.command {
        Command::Constant(a) => constant(a, caps)?,
        Command::Count(a) => count(a, caps)?,
        Command::Tables(a) => return run_tables(a, caps, cli.format),
        Command::Ulam(a) => ulam(a)?,
        Command::Euler(a) => euler(a, caps)?,
    };
    Ok(emit.render(cli.format))
}

#[derive(Clone, Copy)]
struct Caps {
    allow_large: bool,
}

impl Caps {
    fn check(self, what: &'static str, requested: u64, budget: u64) -> Result<u64> {
        if requested > budget && !self.allow_large {
            return Err(Error::Capacity {
                what,
                requested,
                budget,
            }
            .into());
        }
        Ok(requested)
    }

    fn x(self, x: u64) -> Result<u64> {
        self.check("x (use --allow-large)", x, MAX_X)
    }

    fn prime_bound(self, b: u64) -> Result<u64> {
        self.check("prime bound (use --allow-large)", b, MAX_PRIME_BOUND)
    }
}

fn family(text: &str) -> Result<PolyFamily> {
    Ok(check_family(&parse_family(text)?)?)
}

fn need<T: Copy>(value: Option<T>, flag: &str, context: &str) -> Result<T> {
    value.ok_or_else(|| CliError::Usage(format!("{context} requires {flag}")))
}

fn constant(a: &ConstantArgs, caps: Caps) -> Result<Emit> {
    let bound = caps.prime_bound(a.bound)?;
    let mut out = Emit::default();
    match a.form {
        Form::Bh => {
            let text = a
                .family
                .as_deref()
                .ok_or_else(|| CliError::Usage("--form bh requires -f FAMILY".into()))?;
            let fam = family(text)?;
            let schedule = match (&a.checkpoints, &a.prime_counts) {
                (Some(b), _) => CheckpointSchedule::PrimeBounds(b.clone()),
                (None, Some(n)) => CheckpointSchedule::PrimeCounts(n.clone()),
                (None, None) => CheckpointSchedule::decades(bound),
            };
            let opts = ConstantOptions {
                allow_override: a.allow_inadmissible,
                ..Default::default()
            };
            let est = bh_constant_with(&fam, bound, &schedule, &opts)?;
            out.summary("family", &est.family);
            out.summary("prime bound", est.prime_bound);
            out.summary("primes used", est.primes_used);
            out.summary("value", sig(est.value, CONSTANT_DIGITS));
            if let Some(v) = est.verdict {
                out.summary("verdict", json!(v).as_str().unwrap_or_default());
            }
            let mut sheet = Sheet::new(&["at", "last_prime", "primes", "value"]);
            for cp in &est.checkpoints {
                sheet.push(vec![
                    cp.at.to_string(),
                    cp.last_prime.to_string(),
                    cp.primes.to_string(),
                    sig(cp.value, CONSTANT_DIGITS),
                ]);
            }
            if sheet.rows.is_empty() {
                sheet.push(vec![
                    bound.to_string(),
                    String::new(),
                    est.primes_used.to_string(),
                    sig(est.value, CONSTANT_DIGITS),
                ]);
            }
            out.sheet = Some(sheet);
            out.record(&est);
        }
        Form::Ap => {
            let m = need(a.modulus, "-a/--modulus", "--form ap")?;
            let r = need(a.residue, "-b/--residue", "--form ap")?;
            let c = ap_constant(m, r)?;
            out.summary("family", format!("{m}*t{r:+}"));
            out.summary("ratio", c.ratio);
            out.summary("value", sig(c.value(), CONSTANT_DIGITS));
            out.record(&json!({
                "family": format!("{m}*t{r:+}"),
                "numerator": c.ratio.numer(),
                "denominator": c.ratio.denom(),
                "value": c.value(),
            }));
        }
        Form::Ck => {
            let k = need(a.k, "-k", "--form ck")?;
            let c = ck_constant(k, bound)?;
            out.summary("k", k);
            out.summary("prime bound", bound);
            out.summary("value", sig(c.value, CONSTANT_DIGITS));
            out.summary("tail bound", format!("{:.3e}", c.tail_bound));
            out.record(&c);
        }
        Form::Hlf => {
            let c = match a.coeffs.as_deref() {
                Some(&[x, y, z]) => (x, y, z),
                _ => return Err(CliError::Usage("--form hlf requires --coeffs a,b,c".into())),
            };
            let h = hlf_constant(c.0, c.1, c.2, bound)?;
            out.summary("polynomial", IntPoly::from_i64s(&[c.2, c.1, c.0]));
            out.summary("prime bound", bound);
            out.summary("epsilon", h.epsilon);
            out.summary("value", sig(h.value, CONSTANT_DIGITS));
            out.record(&h);
        }
        Form::Greentao => {
            let k = need(a.k, "-k", "--form greentao")?;
            let k =
                u32::try_from(k).map_err(|_| CliError::Usage(format!("-k {k} is too large")))?;
            let value = match a.step {
                Some(step) => ap_family_constant(k, step, bound)?,
                None => greentao_constant(k, bound)?,
            };
            out.summary("k", k);
            if let Some(step) = a.step {
                out.summary("step", step);
            }
            out.summary("prime bound", bound);
            out.summary("value", sig(value, CONSTANT_DIGITS));
            out.record(&json!({"k": k, "step": a.step, "prime_bound": bound, "value": value}));
        }
    }
    Ok(out)
}

fn count(a: &CountArgs, caps: Caps) -> Result<Emit> {
    let x = || -> Result<u64> { caps.x(need(a.x, "-x", "this count")?) };
    // The family, when there is one, is what --predict evaluates.
    let (report, fam): (CountReport, Option<PolyFamily>) = if let Some(text) = &a.family {
        let fam = family(text)?;
        let opts = CountOptions {
            allow_override: a.allow_inadmissible,
        };
        (count_q_with(&fam, x()?, &opts)?, Some(fam))
    } else if a.pairs {
        let mode = match a.first_primes {
            Some(n) => PairMode::FirstPrimes(n),
            None => PairMode::Bound(x()?),
        };
        let fam = check_family(&[IntPoly::t(), IntPoly::linear(1, a.k as i64)])?;
        (count_pairs(a.k, mode)?, Some(fam))
    } else if let Some(kind) = a.chains {
        return chains(a, kind, caps);
    } else if let Some(ap) = &a.ap {
        let (m, r) = match ap.as_slice() {
            &[m, r] if m > 0 => (m as u64, r),
            _ => return Err(CliError::Usage("--ap expects A,B with A > 0".into())),
        };
        (count_ap(m, r, x()?)?, None)
    } else if a.landau {
        (count_landau(x()?)?, None)
    } else if a.sophie {
        let fam = check_family(&[IntPoly::t(), IntPoly::linear(2, 1)])?;
        (count_sophie(x()?)?, Some(fam))
    } else if a.brun {
        let x = x()?;
        let b = brun_partial(x)?;
        let mut out = Emit::default();
        out.summary("x", x);
        out.summary("brun partial sum", format!("{b:.10}"));
        out.record(&json!({"subject": "brun", "x": x, "value": b}));
        return Ok(out);
    } else {
        (illiac_count()?, None)
    };

    let mut naive = None;
    let report = match (&fam, a.predict) {
        (Some(f), true) => {
            let opts = ConstantOptions {
                allow_override: a.allow_inadmissible,
                ..Default::default()
            };
            let bound = caps.prime_bound(a.constant_bound)?;
            let est = bh_constant_with(f, bound, &CheckpointSchedule::none(), &opts)?;
            let limit = (report.range.limit() as f64).max(2.0);
            naive = Some(report.count as f64 / predict_with_constant(f, 1.0, limit)?.predicted);
            with_constant(report, f, est.value)?
        }
        (None, true) => {
            return Err(CliError::Usage(
                "--predict applies to -f, --pairs and --sophie".into(),
            ))
        }
        (_, false) => report,
    };
    Ok(count_emit(&report, naive))
}

fn count_emit(report: &CountReport, naive: Option<f64>) -> Emit {
    let mut out = Emit::default();
    out.summary("subject", &report.subject);
    let mut headers = vec!["subject", "limit", "count"];
    let mut row = vec![
        report.subject.clone(),
        report.range.limit().to_string(),
        report.count.to_string(),
    ];
    match report.range {
        bhcount::census::CountRange::UpTo { x } => out.summary("x", x),
        bhcount::census::CountRange::FirstPrimes { n, last_prime } => {
            out.summary("first primes", n);
            out.summary("last prime", last_prime);
        }
    }
    out.summary("count", report.count);
    if let (Some(p), Some(r)) = (&report.prediction, report.ratio) {
        out.summary("constant", sig(p.constant, CONSTANT_DIGITS));
        out.summary("predicted", format!("{:.1}", p.predicted));
        out.summary("ratio", sig(r, CONSTANT_DIGITS));
        headers.extend(["constant", "predicted", "ratio"]);
        row.extend([
            sig(p.constant, CONSTANT_DIGITS),
            format!("{:.1}", p.predicted),
            sig(r, CONSTANT_DIGITS),
        ]);
    }
    if let Some(n) = naive {
        out.summary("ratio with constant 1", sig(n, CONSTANT_DIGITS));
        headers.push("naive_ratio");
        row.push(sig(n, CONSTANT_DIGITS));
    }
    let mut sheet = Sheet::new(&headers);
    sheet.push(row);
    out.sheet = Some(sheet);
    let mut rec = serde_json::to_value(report).expect("plain data");
    if let Some(n) = naive {
        rec["naive_ratio"] = json!(n);
    }
    out.records.push(rec);
    out
}

fn chains(a: &CountArgs, kind: ChainArg, caps: Caps) -> Result<Emit> {
    let bound = caps.x(need(a.bound, "--bound", "--chains")?)?;
    let kind = match kind {
        ChainArg::First => ChainKind::First,
        ChainArg::Second => ChainKind::Second,
    };
    let found = cunningham_chains(kind, bound, a.min_len)?;
    let mut out = Emit::default();
    out.summary("bound", bound);
    out.summary("chains", found.len());
    let mut sheet = Sheet::new(&["first", "length", "complete", "elements"]);
    for c in &found {
        let elems: Vec<String> = c.elements.iter().map(u64::to_string).collect();
        sheet.push(vec![
            c.first().to_string(),
            c.len().to_string(),
            c.complete.to_string(),
            elems.join(" "),
        ]);
        out.record(c);
    }
    out.sheet = Some(sheet);
    Ok(out)
}

fn run_tables(a: &TablesArgs, caps: Caps, format: Format) -> Result<String> {
    let exponent_cap = |n: u32| -> Result<u32> {
        caps.check("table exponent (use --allow-large)", n as u64, 6)?;
        Ok(n)
    };
    let sheet = match a.id {
        TableId::Logint => tables::logint(caps.x(a.max.unwrap_or(MAX_X))?),
        TableId::Disagree => tables::disagree(caps.x(a.max.unwrap_or(1_000_000))?)?,
        TableId::Divergezero => tables::divergezero(exponent_cap(a.max_n.unwrap_or(6))?)?,
        TableId::Ck => tables::ck(a.through)?,
        TableId::Pis => tables::pis(exponent_cap(a.max_n.unwrap_or(6))?)?,
    };
    if let Some(path) = &a.out {
        fs::write(path, sheet.to_csv())
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    let Some(golden) = &a.diff else {
        let mut out = Emit::default();
        for row in &sheet.rows {
            let obj: serde_json::Map<_, _> = sheet
                .headers
                .iter()
                .cloned()
                .zip(row.iter().map(|c| cell_json(c)))
                .collect();
            out.records.push(obj.into());
        }
        out.sheet = Some(sheet);
        return Ok(out.render(format));
    };
    let text = if golden.is_empty() {
        a.id.golden().to_string()
    } else {
        fs::read_to_string(golden).map_err(|e| CliError::Io(format!("{golden}: {e}")))?
    };
    let cmp = tables::compare(&sheet, &text, a.sig_digits)?;
    let mut report = format!(
        "rows checked: {}\nmismatches: {}\n",
        cmp.rows_checked,
        cmp.mismatches.len()
    );
    if !cmp.unmatched.is_empty() {
        report.push_str(&format!(
            "not in golden file: {}\n",
            cmp.unmatched.join(", ")
        ));
    }
    for m in &cmp.mismatches {
        report.push_str(m);
        report.push('\n');
    }
    if cmp.mismatches.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Mismatch(report))
    }
}

/// Table cells as JSON numbers where they parse as such.
fn cell_json(cell: &str) -> serde_json::Value {
    if let Ok(i) = cell.parse::<i64>() {
        json!(i)
    } else if let Ok(f) = cell.parse::<f64>() {
        json!(f)
    } else {
        json!(cell)
    }
}

fn pixel_budget() -> Result<u64> {
    match std::env::var(MEMORY_ENV) {
        Ok(v) => crate::numbers::parse_count(&v)
            .map_err(|e| CliError::Usage(format!("{MEMORY_ENV}: {e}"))),
        Err(_) => Ok(DEFAULT_PIXEL_BUDGET),
    }
}

fn ulam(a: &UlamArgs) -> Result<Emit> {
    if a.ray.contains(&0) {
        return Err(CliError::Usage("spiral values start at 1".into()));
    }
    let rays: Vec<RaySpec> = match (a.ray.len(), a.dir.len()) {
        (r, d) if r == d => a
            .ray
            .iter()
            .zip(&a.dir)
            .map(|(&v, &d)| RaySpec::from_value(v, d).with_skip(a.skip))
            .collect(),
        (_, 1) => a
            .ray
            .iter()
            .map(|&v| RaySpec::from_value(v, a.dir[0]).with_skip(a.skip))
            .collect(),
        (r, d) => {
            return Err(CliError::Usage(format!(
                "{r} --ray values but {d} --dir values"
            )))
        }
    };
    if a.side.is_none() && !a.report {
        return Err(CliError::Usage(
            "nothing to do: give --side or --report".into(),
        ));
    }
    let mut out = Emit::default();
    if let Some(side) = a.side {
        if side % 2 == 0 {
            return Err(CliError::Usage(format!("--side must be odd, got {side}")));
        }
        let overlay: &[RaySpec] = if a.overlay { &rays } else { &[] };
        let raster = render_spiral(side, overlay, pixel_budget()?)?;
        let primes = raster.count(bhcount::ulam::PRIME_PIXEL);
        out.summary("side", side);
        out.summary("prime pixels", primes);
        if let Some(path) = &a.out {
            fs::write(path, raster.to_pgm())
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            out.summary("written", path.display());
        }
        out.record(&json!({"side": side, "prime_pixels": primes, "out": a.out}));
    }
    if a.report {
        if rays.is_empty() {
            return Err(CliError::Usage(
                "--report needs at least one --ray/--dir pair".into(),
            ));
        }
        let mut sheet = Sheet::new(&[
            "anchor",
            "direction",
            "A",
            "b",
            "c",
            "values",
            "primes_found",
            "constant",
        ]);
        for spec in &rays {
            let r = ray_report(spec, a.count)?;
            sheet.push(vec![
                spiral_value(r.ray.anchor.0, r.ray.anchor.1).to_string(),
                r.ray.direction.to_string(),
                r.quadratic.a.to_string(),
                r.quadratic.b.to_string(),
                r.quadratic.c.to_string(),
                r.values_tested.to_string(),
                r.primes_found.to_string(),
                r.constant()
                    .map(|c| sig(c, CONSTANT_DIGITS))
                    .unwrap_or_default(),
            ]);
            out.record(&r);
        }
        out.sheet = Some(sheet);
    }
    Ok(out)
}

fn euler(a: &EulerArgs, caps: Caps) -> Result<Emit> {
    let selection = match (a.primes_through, a.first_odd_primes) {
        (Some(b), _) => Some(PrimeSelection::Through(b)),
        (None, Some(n)) => Some(PrimeSelection::FirstOddPrimes(n as usize)),
        (None, None) => None,
    };
    let explicit_k = match a.streak.as_deref() {
        Some("") | None => None,
        Some(s) => Some(
            s.parse::<BigInt>()
                .map_err(|_| CliError::Usage(format!("--streak: {s:?} is not an integer")))?,
        ),
    };
    let mut out = Emit::default();
    let Some(selection) = selection else {
        let k = explicit_k.ok_or_else(|| {
            CliError::Usage("give --primes-through, --first-odd-primes or --streak K".into())
        })?;
        let streak = euler_streak(&k)?;
        out.summary("k", &k);
        out.summary("streak", streak);
        out.record(&json!({"k": k.to_string(), "streak": streak}));
        return Ok(out);
    };
    let rule = match (&a.residues, a.rule) {
        (Some(r), _) => NonresidueRule::Explicit(r.clone()),
        (None, RuleArg::LeastPrimitiveRoot) => NonresidueRule::LeastPrimitiveRoot,
        (None, RuleArg::LeastNonresidue) => NonresidueRule::LeastNonresidue,
        (None, RuleArg::PublishedK100) => NonresidueRule::Explicit(published_k100_nonresidues()),
    };
    let rep = if a.least_absolute {
        Representative::LeastAbsolute
    } else {
        Representative::LeastPositive
    };
    let plan = build_plan(&selection, &rule, rep)?;
    let verified = verify_plan(&plan);
    let digits = plan.k.magnitude().to_string().len();
    out.summary("primes", plan.primes.len());
    out.summary("largest prime", plan.primes.last().copied().unwrap_or(0));
    out.summary("k", &plan.k);
    out.summary("digits", digits);
    out.summary("verified", verified);
    let mut rec = serde_json::to_value(&plan).expect("plain data");
    rec["digits"] = json!(digits);
    rec["verified"] = json!(verified);
    if a.streak.is_some() {
        let k = explicit_k.unwrap_or_else(|| plan.k.clone());
        let streak = euler_streak(&k)?;
        out.summary("streak", streak);
        rec["streak"] = json!(streak);
    }
    if let Some(b) = a.constant_bound {
        let bound = caps.prime_bound(b)?;
        let fam = check_family(&[plan.polynomial()])?;
        let est = bh_constant_with(
            &fam,
            bound,
            &CheckpointSchedule::none(),
            &Default::default(),
        )?;
        out.summary("constant", sig(est.value, CONSTANT_DIGITS));
        out.summary("constant bound", bound);
        rec["constant"] = json!(est.value);
        rec["constant_bound"] = json!(bound);
    }
    out.records.push(rec);
    Ok(out)
}
