use std::fmt::Write as _;
use std::sync::Arc;

use eqper_core::chartab::CharacterTable;
use eqper_core::grp::Subgroup;
use eqper_core::periodic::{
    self, annihilator_kernel, certify, euler_quotient, factor_through_image, family_f, family_fbracket,
    j_point_order, j_quotient_order, karoubi_rank, mult_matrix, predicate_jper, predicate_talpha,
    talpha_order, CertFlavor, EulerQuotient, QuotientSummary,
};
use eqper_core::repring::{parse_rep_expr, real_structure, Flavor, FlavoredRep, VirtualChar};
use serde_json::{json, Value};

use crate::args::{Command, LambdaArgs, PredicateKind};
use crate::CliError;

/// A finished report in both renderings.
pub struct Report {
    pub json: Value,
    pub text: String,
}

fn parse(t: &Arc<CharacterTable>, src: &str) -> Result<VirtualChar, CliError> {
    parse_rep_expr(src, t).map_err(|e| CliError::user(format!("in {src:?}: {e}")))
}

fn rep_json(v: &VirtualChar) -> Value {
    let coords: Vec<String> = v.coords().iter().map(|c| c.to_string()).collect();
    json!({"expr": v.to_string(), "coords": coords})
}

fn quotient_json(q: &EulerQuotient) -> Value {
    serde_json::to_value(QuotientSummary::from(q.group())).expect("summary serializes")
}

fn flavored(t: &Arc<CharacterTable>, src: &str, real: bool) -> Result<FlavoredRep, CliError> {
    let v = parse(t, src)?;
    if real {
        FlavoredRep::real(v).map_err(CliError::from)
    } else {
        Ok(FlavoredRep::complex(v))
    }
}

/// The quotient for `C(a_lambda^m)`; a real `lambda` uses its
/// complexification at half the power.
fn quotient(t: &Arc<CharacterTable>, args: &LambdaArgs) -> Result<(FlavoredRep, EulerQuotient), CliError> {
    let lam = flavored(t, &args.lambda, args.lambda_real)?;
    let m = match lam.flavor() {
        Flavor::Complex => args.power,
        Flavor::Real if args.power.is_multiple_of(2) => args.power / 2,
        Flavor::Real => return Err(periodic::PeriodicError::OddRealPower(args.power).into()),
    };
    let q = euler_quotient(lam.rep(), m)?;
    Ok((lam, q))
}

fn subgroup_json(s: &Subgroup) -> Value {
    json!({"order": s.order(), "generators": s.generators()})
}

fn basis_names(t: &CharacterTable) -> Vec<String> {
    (0..t.len()).map(|i| t.display_name(i).to_string()).collect()
}

pub fn gamma_report(m: u64) -> Report {
    let g = periodic::gamma(m);
    Report {
        json: json!({"m": m, "gamma": g}),
        text: format!("{g}\n"),
    }
}

pub fn execute(cmd: &Command, t: &Arc<CharacterTable>) -> Result<Report, CliError> {
    let group = t.group().descriptor();
    let mut text = String::new();
    let json = match cmd {
        Command::Gamma { m } => return Ok(gamma_report(*m)),
        Command::Chartab => {
            let cc = t.classes();
            let rs = real_structure(t);
            let names = basis_names(t);
            let _ = writeln!(text, "{group}");
            let header: Vec<String> = (0..cc.len())
                .map(|j| format!("{}a[{}]", cc.rep_order(j), cc.size(j)))
                .collect();
            let _ = writeln!(text, "classes: {}", header.join("  "));
            for i in 0..t.len() {
                let vals: Vec<String> = t.row(i).iter().map(|v| v.to_string()).collect();
                let _ = writeln!(
                    text,
                    "{:<10} FS={:>2}  {}",
                    names[i],
                    rs.indicators()[i],
                    vals.join(" | ")
                );
            }
            let mut v = serde_json::to_value(&**t).expect("tables serialize");
            let aliases: std::collections::BTreeMap<&str, &str> =
                t.aliases().iter().map(|(k, &i)| (k.as_str(), t.label(i))).collect();
            v["names"] = json!(aliases);
            v["indicators"] = json!(rs.indicators());
            v
        }
        Command::Euler(args) => {
            let (lam, q) = quotient(t, args)?;
            let _ = writeln!(text, "e^{} = {}", q.power(), q.euler());
            let _ = write!(text, "presentation:\n{}", q.presentation());
            let _ = writeln!(text, "quotient: {}", q.group());
            json!({
                "group": group,
                "lambda": lam.rep().to_string(),
                "lambda_flavor": lam.flavor(),
                "power": args.power,
                "euler": rep_json(q.euler()),
                "basis": basis_names(t),
                "presentation": q.presentation(),
                "quotient": quotient_json(&q),
                "basis_note": q.basis_note(),
            })
        }
        Command::Adams { rep, k } => {
            let v = parse(t, rep)?;
            let r = v.adams(*k);
            let _ = writeln!(text, "{r}");
            json!({"group": group, "rep": rep_json(&v), "k": k, "result": rep_json(&r)})
        }
        Command::Exterior { rep, i } => {
            let v = parse(t, rep)?;
            let r = v.exterior(*i)?;
            let _ = writeln!(text, "{r}");
            json!({"group": group, "rep": rep_json(&v), "i": i, "result": rep_json(&r)})
        }
        Command::Tensor { a, b } => {
            let (x, y) = (parse(t, a)?, parse(t, b)?);
            let r = x.tensor(&y)?;
            let _ = writeln!(text, "{r}");
            json!({"group": group, "a": rep_json(&x), "b": rep_json(&y), "result": rep_json(&r)})
        }
        Command::Mult { rep } => {
            let v = parse(t, rep)?;
            let m = mult_matrix(&v)?;
            let _ = write!(text, "basis: {}\n{m}", basis_names(t).join(", "));
            json!({"group": group, "rep": rep_json(&v), "basis": basis_names(t), "matrix": m})
        }
        Command::Rank {
            alpha_plus,
            alpha_minus,
            complex,
        } => {
            let (v, w) = (parse(t, alpha_plus)?, parse(t, alpha_minus)?);
            let flavor = if *complex { Flavor::Complex } else { Flavor::Real };
            let r = karoubi_rank(&v, &w, flavor)?;
            let _ = writeln!(text, "{r}");
            json!({
                "group": group,
                "alpha_plus": rep_json(&v),
                "alpha_minus": rep_json(&w),
                "flavor": flavor,
                "rank": r,
            })
        }
        Command::Order { lambda, alpha } => {
            let (lam, q) = quotient(t, lambda)?;
            let a = parse(t, alpha)?;
            let o = talpha_order(&q, &a)?;
            let _ = writeln!(text, "{o}");
            json!({
                "group": group,
                "lambda": lam.rep().to_string(),
                "lambda_flavor": lam.flavor(),
                "power": lambda.power,
                "alpha": rep_json(&a),
                "order": o.to_string(),
                "quotient": quotient_json(&q),
            })
        }
        Command::Jorder {
            alpha,
            lambda,
            power,
            lambda_real,
            odd_only,
        } => {
            let a = parse(t, alpha)?;
            let (o, odd, lam) = match lambda {
                None => {
                    let odd = odd_only.unwrap_or(false);
                    (j_point_order(&a, odd)?, odd, Value::Null)
                }
                Some(l) => {
                    let args = LambdaArgs {
                        lambda: l.clone(),
                        power: *power,
                        lambda_real: *lambda_real,
                    };
                    let (lam, q) = quotient(t, &args)?;
                    let odd = odd_only.unwrap_or(true);
                    (j_quotient_order(&q, &a, odd)?, odd, json!(lam.rep().to_string()))
                }
            };
            let _ = writeln!(text, "{o}");
            json!({
                "group": group,
                "alpha": rep_json(&a),
                "lambda": lam,
                "power": if lambda.is_some() { json!(power) } else { Value::Null },
                "odd_only": odd,
                "order": o.to_string(),
                "order_semantics": "J-prime order (upper bound)",
            })
        }
        Command::Predicate { lambda, alpha, kind } => {
            let (l, a) = (parse(t, lambda)?, parse(t, alpha)?);
            let p = match kind {
                PredicateKind::Talpha => predicate_talpha(&l, &a)?,
                PredicateKind::Jper => predicate_jper(&l, &a)?,
            };
            let _ = writeln!(text, "{}", p.holds);
            for w in &p.witnesses {
                let _ = writeln!(
                    text,
                    "  |C| = {:<3} dim lambda^C = {:<3} alpha condition = {}",
                    w.cyclic_rep_order, w.lambda_fixed_dim, w.alpha_condition
                );
            }
            let kind = match kind {
                PredicateKind::Talpha => "talpha",
                PredicateKind::Jper => "jper",
            };
            json!({
                "group": group,
                "lambda": rep_json(&l),
                "alpha": rep_json(&a),
                "kind": kind,
                "holds": p.holds,
                "witnesses": p.witnesses,
            })
        }
        Command::Families { alpha } => {
            let a = parse(t, alpha)?;
            let f = family_f(&a)?;
            let fb = family_fbracket(&a)?;
            let orders = |v: &[Subgroup]| v.iter().map(|s| s.order().to_string()).collect::<Vec<_>>().join(" ");
            let _ = writeln!(text, "F(alpha):  orders {}", orders(&f));
            let _ = writeln!(text, "F[alpha]:  orders {}", orders(&fb));
            json!({
                "group": group,
                "alpha": rep_json(&a),
                "F": f.iter().map(subgroup_json).collect::<Vec<_>>(),
                "F_bracket": fb.iter().map(subgroup_json).collect::<Vec<_>>(),
            })
        }
        Command::Certify {
            lambda,
            alpha,
            flavor,
            odd_only,
        } => {
            let fl: CertFlavor = flavor.parse().map_err(CliError::user)?;
            let lam = flavored(t, &lambda.lambda, lambda.lambda_real)?;
            let a = parse(t, alpha)?;
            let c = certify(&lam, lambda.power, &a, fl, *odd_only)?;
            text = c.to_string();
            serde_json::to_value(&c).expect("certificates serialize")
        }
        Command::Factor {
            rep,
            euler_of,
            expected_rank,
        } => {
            let v = match (rep, euler_of) {
                (Some(r), _) => parse(t, r)?,
                (None, Some(l)) => periodic::euler_of(&parse(t, l)?)?,
                (None, None) => return Err(CliError::user("factor needs --rep or --euler-of")),
            };
            let e = mult_matrix(&v)?;
            let f = factor_through_image(&e, *expected_rank)?;
            let _ = writeln!(text, "rank {} (applicable: {})", f.rank, f.applicable);
            let _ = write!(text, "M =\n{}N =\n{}", f.m, f.n);
            json!({
                "group": group,
                "rep": rep_json(&v),
                "basis": basis_names(t),
                "E": e,
                "rank": f.rank,
                "expected_rank": expected_rank,
                "applicable": f.applicable,
                "M": f.m,
                "N": f.n,
            })
        }
        Command::Annihilator { lambda } => {
            let l = parse(t, lambda)?;
            let k = annihilator_kernel(&l)?;
            let reps: Vec<VirtualChar> = k
                .columns()
                .into_iter()
                .map(|c| VirtualChar::new(t.clone(), c).expect("kernel columns fit the table"))
                .collect();
            let _ = writeln!(text, "rank {}", k.cols());
            for r in &reps {
                let _ = writeln!(text, "  {r}");
            }
            json!({
                "group": group,
                "lambda": rep_json(&l),
                "rank": k.cols(),
                "basis": reps.iter().map(rep_json).collect::<Vec<_>>(),
            })
        }
    };
    Ok(Report { json, text })
}
