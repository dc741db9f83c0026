use std::io::Write;

use padic_ergodic::builder::{build_ergodic, random_blueprint, random_measure_preserving, Family};
use padic_ergodic::criteria::{
    check_ergodic_additive, check_ergodic_cyclic_subgroup, check_ergodic_fixed_derivative,
    check_ergodic_general, check_ergodic_gform, check_ergodic_perdigit_affine, check_ergodic_unif_diff,
    check_measure_preserving_coords, check_measure_preserving_vdp, infer_slopes, Verdict, VerdictKind,
    Witness,
};
use padic_ergodic::func::{vdp_coefficients, vdp_eval};
use padic_ergodic::oracle::{
    cross_validate, cycle_structure_mod, is_single_cycle_mod, orbit_of_zero, write_reports_csv,
};
use padic_ergodic::padic::digit;
use padic_ergodic::{CompatibleFn, Error, Expr, PadicInt, Perm, Residue, Result};
use serde_json::json;

use crate::spec::{read_spec, Ctx, Spec};
use crate::{Format, Method};

/// Process exit status on success paths: 0 holds or agrees, 1 fails.
pub type Status = u8;

fn out(text: impl AsRef<str>) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    match writeln!(stdout, "{}", text.as_ref()) {
        // the reader went away, as with `| head`; nothing left to report to
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        other => other.map_err(|e| Error::Output(e.to_string())),
    }
}

pub fn eval(ctx: Ctx, format: Format, spec: &str, x: u64, k: Option<u32>) -> Result<Status> {
    let mut f = ctx.function(&read_spec(spec)?)?;
    let k = k.unwrap_or(f.depth() + 1);
    if k > f.depth() + 1 && matches!(f.repr(), padic_ergodic::func::Repr::Expr(_)) {
        f = f.with_depth(k - 1)?;
    }
    let r = f.eval(&Residue::new(x, k, f.p())?)?;
    let digits: Vec<u64> = (0..k).map(|j| digit(r.value(), j, f.p())).collect();
    match format {
        Format::Text => {
            let shown: Vec<String> = digits.iter().rev().map(u64::to_string).collect();
            out(format!("f({x}) = {r}  digits (high to low): {}", shown.join(" ")))?;
        }
        Format::Json => out(
            json!({"x": x, "p": f.p().get(), "k": k, "value": r.value(), "digits": digits}).to_string(),
        )?,
        Format::Csv => {
            let shown: Vec<String> = digits.iter().map(u64::to_string).collect();
            out("x,p,k,value,digits")?;
            out(format!("{x},{},{k},{},{}", f.p(), r.value(), shown.join(" ")))?;
        }
    }
    Ok(0)
}

fn padic_value(v: &PadicInt) -> u64 {
    v.reduce(v.precision() as u32).expect("full precision").value()
}

pub fn vdp(ctx: Ctx, format: Format, spec: &str, verify: bool) -> Result<Status> {
    let f = ctx.function(&read_spec(spec)?)?;
    let n = f.depth() + 1;
    let coeffs = vdp_coefficients(&f, n)?;
    if verify {
        for x in 0..f.modulus() {
            let got = vdp_eval(&coeffs, &Residue::new(x, n, f.p())?)?.value();
            if got != f.value(x) {
                return Err(Error::NotCompatible(format!(
                    "series gives {got} at x = {x}, the function gives {}",
                    f.value(x)
                )));
            }
        }
        eprintln!("verified: the series reproduces f modulo {}^{n} at all {} points", f.p(), f.modulus());
    }
    let rows: Vec<(usize, u64, u64)> = (0..coeffs.len())
        .map(|m| (m, padic_value(coeffs.big(m)), padic_value(coeffs.small(m))))
        .collect();
    match format {
        Format::Text | Format::Csv => {
            out("m,B,b")?;
            for (m, big, small) in rows {
                out(format!("{m},{big},{small}"))?;
            }
        }
        Format::Json => {
            let body: Vec<_> = rows.iter().map(|&(m, big, small)| json!({"m": m, "B": big, "b": small})).collect();
            out(json!({"p": f.p().get(), "precision": n, "coefficients": body}).to_string())?;
        }
    }
    Ok(0)
}

#[derive(Debug, Default)]
pub struct CheckArgs {
    pub method: Method,
    pub s: Option<u32>,
    pub derivative: Option<String>,
    pub phi0: Option<String>,
    pub count: u64,
    pub seed: u64,
}

fn require<T>(value: Option<T>, flag: &str, method: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParams(format!("--method {method} needs {flag}")))
}

fn family(spec: &Spec, method: &str) -> Result<Family> {
    match spec {
        Spec::Family(f) if f.name() == method => Ok(f.clone()),
        _ => Err(Error::InvalidParams(format!(
            "--method {method} needs a {{\"family\": \"{method}\", …}} parameter object"
        ))),
    }
}

fn int(n: i128, f_depth: u32, ctx: Ctx) -> Result<PadicInt> {
    PadicInt::from_integer(n, ctx.prime()?, f_depth as usize + 2)
}

fn oracle_verdict(f: &CompatibleFn, depth: u32) -> Result<Verdict> {
    let mut failure = None;
    for k in 0..=depth {
        let c = is_single_cycle_mod(f, k + 1)?;
        if !c.single_cycle {
            failure = Some((k, Witness::OracleCycle { orbit_length: c.orbit_length }));
            break;
        }
    }
    Ok(Verdict::from_first_failure(VerdictKind::Ergodic, depth, failure))
}

fn print_verdict(format: Format, v: &Verdict) -> Result<Status> {
    match format {
        Format::Json => out(v.to_json())?,
        Format::Text => {
            out(v.to_string())?;
            for l in &v.levels {
                out(format!("  {l}"))?;
            }
            for s in &v.sums {
                out(format!("  sum at level {}: {} ({})", s.k, s.lhs, if s.holds { "nonzero" } else { "zero" }))?;
            }
            for n in &v.notes {
                out(format!("  note: {n}"))?;
            }
        }
        Format::Csv => {
            out("k,status,witness")?;
            for l in &v.levels {
                let status = if v.holds_at(l.k) { "holds" } else { "fails" };
                let w = l.witness.as_ref().map(|w| w.to_string().replace('"', "'")).unwrap_or_default();
                out(format!("{},{status},\"{w}\"", l.k))?;
            }
        }
    }
    Ok(u8::from(!v.holds()))
}

fn random_corpus(ctx: Ctx, count: u64, seed: u64) -> Result<Vec<(String, CompatibleFn)>> {
    let (p, depth) = (ctx.prime()?, ctx.depth());
    (0..count)
        .map(|i| {
            let s = seed.wrapping_add(i);
            let t = if i % 2 == 0 {
                random_measure_preserving(s, p, depth)?
            } else {
                build_ergodic(&random_blueprint(s, p, depth)?)?
            };
            Ok((format!("random/{s}"), CompatibleFn::from_table(t)))
        })
        .collect()
}

fn cross(ctx: Ctx, format: Format, spec: Option<&str>, args: &CheckArgs) -> Result<Status> {
    let corpus = match spec {
        Some(s) => ctx.corpus(&read_spec(s)?)?,
        None => random_corpus(ctx, args.count, args.seed)?,
    };
    let depth = match ctx.depth {
        Some(d) => d,
        None => corpus.iter().map(|(_, f)| f.depth()).min().unwrap_or(0),
    };
    let reports = cross_validate(&corpus, depth)?;
    let disagreements = reports.iter().filter(|r| !r.agree).count();
    match format {
        Format::Csv => write_reports_csv(&reports, std::io::stdout().lock())?,
        Format::Json => out(serde_json::to_string(&reports)?)?,
        Format::Text => {
            for r in reports.iter().filter(|r| !r.agree) {
                out(format!("disagreement: {} {:?}", r.id, r.levels))?;
            }
            out(format!(
                "{} functions through depth {depth}: {} agree, {disagreements} disagree",
                reports.len(),
                reports.len() - disagreements
            ))?;
        }
    }
    Ok(u8::from(disagreements > 0))
}

pub fn check(ctx: Ctx, format: Format, spec: Option<&str>, args: &CheckArgs) -> Result<Status> {
    if args.method == Method::Cross {
        return cross(ctx, format, spec, args);
    }
    let name = args.method.name();
    let spec = read_spec(require(spec, "a function argument", name)?)?;
    let verdict = match args.method {
        Method::Gform => match &args.phi0 {
            Some(phi0) => {
                let phi0: Perm = phi0.parse()?;
                let g = ctx.function(&spec)?;
                check_ergodic_gform(&phi0, &g, g.depth())?
            }
            None => {
                let Family::Gform { phi0, g } = family(&spec, name)? else { unreachable!() };
                let depth = ctx.depth();
                let g = CompatibleFn::parse(ctx.prime()?, depth, &g)?;
                check_ergodic_gform(&Perm::new(phi0)?, &g, depth)?
            }
        },
        Method::Cyclic => {
            let Family::Cyclic { phi0, generators, exponents } = family(&spec, name)? else { unreachable!() };
            let depth = ctx.depth();
            // building validates the table shapes
            Family::Cyclic { phi0: phi0.clone(), generators: generators.clone(), exponents: exponents.clone() }
                .build(ctx.prime()?, depth)?;
            let gens = generators.into_iter().map(Perm::new).collect::<Result<Vec<_>>>()?;
            check_ergodic_cyclic_subgroup(
                &Perm::new(phi0)?,
                &gens,
                |k, x| exponents[k as usize - 1][x as usize],
                depth,
            )?
        }
        Method::Affine => {
            let (c, a): (i128, Vec<i128>) = match &spec {
                Spec::Family(Family::Affine { c, a }) => (*c as i128, a.iter().map(|&v| v as i128).collect()),
                Spec::Expr(Expr::Affine { c, coeffs }) => (*c, coeffs.clone()),
                _ => {
                    return Err(Error::InvalidParams(
                        "--method affine needs affine(c,[a0,…]) or an affine family object".into(),
                    ))
                }
            };
            let depth = ctx.depth();
            let c = int(c, depth, ctx)?;
            let a = a.into_iter().map(|v| int(v, depth, ctx)).collect::<Result<Vec<_>>>()?;
            check_ergodic_perdigit_affine(&c, &a, depth)?
        }
        _ => {
            let f = ctx.function(&spec)?;
            let depth = f.depth();
            match args.method {
                Method::General => check_ergodic_general(&f, depth)?,
                Method::Coords => check_measure_preserving_coords(&f, depth)?,
                Method::Vdp => check_measure_preserving_vdp(&f, depth)?,
                Method::Additive => check_ergodic_additive(&f, depth)?,
                Method::Oracle => oracle_verdict(&f, depth)?,
                Method::FixedS => {
                    let s = require(args.s, "--s", name)?;
                    let slopes = infer_slopes(&f, s, depth)?;
                    check_ergodic_fixed_derivative(&f, s, |k, x| slopes[k as usize][x as usize], depth)?
                }
                Method::Unifdiff => {
                    let s = require(args.s, "--s", name)?;
                    let df = require(args.derivative.as_deref(), "--derivative", name)?;
                    let df = CompatibleFn::parse(f.p(), 0, df)?;
                    check_ergodic_unif_diff(&f, |x| df.value(x), s, depth)?
                }
                Method::Gform | Method::Cyclic | Method::Affine | Method::Cross => unreachable!(),
            }
        }
    };
    print_verdict(format, &verdict)
}

pub fn orbit(ctx: Ctx, format: Format, spec: &str, k: Option<u32>) -> Result<Status> {
    let mut f = ctx.function(&read_spec(spec)?)?;
    let k = k.unwrap_or(f.depth() + 1);
    if k > f.depth() + 1 && matches!(f.repr(), padic_ergodic::func::Repr::Expr(_)) {
        f = f.with_depth(k - 1)?;
    }
    let orbit = orbit_of_zero(&f, k)?;
    let cycles = cycle_structure_mod(&f, k)?;
    let single = cycles.is_single_cycle();
    match format {
        Format::Json => out(
            json!({
                "p": f.p().get(),
                "k": k,
                "orbit": orbit,
                "cycle_type": cycles.lengths(),
                "single_cycle": single,
            })
            .to_string(),
        )?,
        Format::Text => {
            let shown: Vec<String> = orbit.iter().map(u64::to_string).collect();
            out(format!("orbit of 0 modulo {}^{k} (length {}): {}", f.p(), orbit.len(), shown.join(" ")))?;
            out(format!("cycle type: {cycles}"))?;
            out(format!("single cycle: {}", if single { "yes" } else { "no" }))?;
        }
        Format::Csv => {
            out("step,value")?;
            for (i, y) in orbit.iter().enumerate() {
                out(format!("{i},{y}"))?;
            }
        }
    }
    Ok(0)
}

pub fn build(ctx: Ctx, seed: u64, targets: Option<&str>, out_path: Option<&str>) -> Result<Status> {
    let (p, depth) = (ctx.prime()?, ctx.depth());
    let mut bp = random_blueprint(seed, p, depth)?;
    if let Some(t) = targets {
        let parsed = t.split(';').map(str::parse).collect::<Result<Vec<Perm>>>()?;
        let parsed = match parsed.len() {
            1 => vec![parsed[0].clone(); depth as usize],
            _ => parsed,
        };
        bp = bp.with_targets(&parsed)?;
    }
    let f = CompatibleFn::from_table(build_ergodic(&bp)?);
    for n in 1..=depth + 1 {
        let c = is_single_cycle_mod(&f, n)?;
        if !c.single_cycle {
            return Err(Error::NotTransitive(format!(
                "built function modulo {p}^{n} (orbit of 0 has length {})",
                c.orbit_length
            )));
        }
    }
    let mut doc = f.to_document();
    let mut meta = serde_json::Map::new();
    meta.insert("seed".into(), seed.into());
    meta.insert("construction".into(), "ergodic".into());
    doc.meta = Some(meta);
    let text = serde_json::to_string(&doc)?;
    let summary = format!("oracle: single cycle modulo {p}^n for n = 1..={}", depth + 1);
    match out_path {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| Error::Output(format!("{path}: {e}")))?;
            out(format!("wrote {path}; {summary}"))?;
        }
        None => {
            out(text)?;
            eprintln!("{summary}");
        }
    }
    Ok(0)
}
