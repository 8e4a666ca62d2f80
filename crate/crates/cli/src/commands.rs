//! One function per subcommand. Each returns the CSV text and a JSON value.

use std::path::Path;

use heightcount::als::config::SystemSpec;
use heightcount::als::{l2_system, standard_system, AdelicLipschitzSystem};
use heightcount::arith::fundamental_discriminants;
use heightcount::census::{self, CountReport, Schedule};
use heightcount::invariants::exponents::schmidt_upper_exponent;
use heightcount::invariants::{
    self, ce_partial_sum, certify_hr_bound, dedekind_zeta, discriminant_bounds, example_d, exponent_check,
    main_term_constant, quantity_csv, schanuel_constant, siegel_brauer_scan, QuantityRow, SchanuelInput,
};
use heightcount::nfq::{class_representatives, parse_invariants, Field, FieldInvariants, Provenance};
use heightcount::Real;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::Failure;

/// Working precision in bits for reported enclosures.
const PREC: u32 = 96;

pub struct Output {
    pub csv: String,
    pub json: Value,
}

type Res<T> = std::result::Result<T, Failure>;

/// Checks that the options a subcommand needs are present and well formed.
pub fn validate(cfg: &RunConfig) -> Res<()> {
    let usage = |m: &str| Err(Failure::Usage(format!("{}: {m}", cfg.subcommand)));
    let grid = cfg.grid_values();
    match cfg.subcommand.as_str() {
        "count-rational" | "count-field" | "count-primitive" | "count-quadratic-p1" | "n-delta" | "n-disc" => {
            if grid.is_empty() {
                return usage("--grid is required");
            }
            if grid.iter().any(|x| x.is_zero()) {
                return usage("grid values must be positive");
            }
        }
        "example-d" if cfg.invariants.is_none() => return usage("--invariants is required"),
        _ => {}
    }
    if cfg.subcommand == "n-disc" && grid.iter().any(|t| !t.is_integer() || t.to_integer() < 3.into()) {
        return usage("grid values must be integers >= 3");
    }
    if cfg.n == 0 {
        return usage("--n must be positive");
    }
    if cfg.system != "standard" && cfg.system != "l2" && !Path::new(&cfg.system).exists() {
        return usage("--system must be standard, l2, or an existing file");
    }
    Ok(())
}

pub fn execute(cfg: &RunConfig) -> Res<Output> {
    match cfg.subcommand.as_str() {
        "field-info" => field_info(cfg),
        "zeta" => zeta(cfg),
        "schanuel" => schanuel(cfg),
        "main-term" => main_term(cfg),
        "ce-sum" => ce_sum(cfg),
        "count-rational" | "count-field" | "count-primitive" | "count-quadratic-p1" => count(cfg),
        "delta" => delta(cfg),
        "n-delta" => n_delta(cfg),
        "n-disc" => n_disc(cfg),
        "lemma-check" => lemma_check(cfg),
        "bounds-check" => bounds_check(cfg),
        "volumes" => volumes(cfg),
        "example-d" => example(cfg),
        other => Err(Failure::Usage(format!("unknown subcommand {other}"))),
    }
}

fn schedule(cfg: &RunConfig) -> Schedule {
    Schedule::new(cfg.workers, cfg.partition)
}

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn field(cfg: &RunConfig) -> Res<Field> {
    Ok(Field::parse(&cfg.field)?)
}

/// The field's invariants, from the supplied file when one is given.
fn invariants_of(cfg: &RunConfig) -> Res<FieldInvariants> {
    match &cfg.invariants {
        Some(path) => {
            let records = parse_invariants(&read(path)?)?;
            records
                .into_iter()
                .find(|r| r.label == cfg.field)
                .ok_or_else(|| Failure::Usage(format!("no record labelled '{}' in {}", cfg.field, path.display())))
        }
        None => Ok(FieldInvariants::compute(&field(cfg)?)),
    }
}

fn system(cfg: &RunConfig) -> Res<AdelicLipschitzSystem> {
    match cfg.system.as_str() {
        "standard" => Ok(standard_system(&field(cfg)?, cfg.n)),
        "l2" => Ok(l2_system(&field(cfg)?, cfg.n)),
        path => {
            let mut spec = SystemSpec::parse(&read(Path::new(path))?)?;
            if cfg.seed != 0 {
                spec.seed = cfg.seed;
            }
            Ok(spec.build()?)
        }
    }
}

fn quantities(cfg: &RunConfig, rows: Vec<QuantityRow>) -> Res<Output> {
    Ok(Output {
        csv: quantity_csv(&rows)?,
        json: json!({ "config": cfg, "rows": rows }),
    })
}

fn table(cfg: &RunConfig, header: &[&str], rows: Vec<Vec<String>>, extra: Value) -> Res<Output> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Failure::Io(e.to_string()))?;
    for r in &rows {
        w.write_record(r).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let csv = String::from_utf8(w.into_inner().map_err(|e| Failure::Io(e.to_string()))?)
        .map_err(|e| Failure::Io(e.to_string()))?;
    let records: Vec<Value> = rows
        .iter()
        .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().map(|v| json!(v))).collect()))
        .collect();
    Ok(Output {
        csv,
        json: json!({ "config": cfg, "rows": records, "summary": extra }),
    })
}

fn field_info(cfg: &RunConfig) -> Res<Output> {
    let k = invariants_of(cfg)?;
    let line = format!(
        "{},{},{},{},{},{},{},{}",
        k.label,
        k.degree,
        k.disc,
        k.r,
        k.s,
        k.h,
        k.regulator.mid_f64(),
        k.w
    );
    let provenance = k.provenance.as_str();
    let csv = format!("# label,degree,disc,r,s,h,R,w\n# provenance={provenance}\n{line}\n");
    let json = json!({
        "label": k.label, "degree": k.degree, "disc": k.disc, "r": k.r, "s": k.s, "h": k.h,
        "regulator_mid": k.regulator.mid_f64(), "regulator_rad": k.regulator.rad_f64(),
        "w": k.w, "provenance": k.provenance,
    });
    Ok(Output { csv, json })
}

fn zeta(cfg: &RunConfig) -> Res<Output> {
    let k = invariants_of(cfg)?;
    let z = dedekind_zeta(&k, cfg.s, cfg.tol)?;
    let row = QuantityRow::new(format!("zeta_{}({})", k.label, cfg.s), &z, Provenance::Computed);
    quantities(cfg, vec![row])
}

fn schanuel(cfg: &RunConfig) -> Res<Output> {
    let k = invariants_of(cfg)?;
    let provenance = k.provenance;
    let input = SchanuelInput::computed(k, cfg.n, cfg.tol / 4.0)?;
    let s = schanuel_constant(&input, invariants::zeta::prec_for(cfg.tol))?;
    let label = &input.invariants.label;
    let zeta = input.zeta_value.as_ref().expect("computed");
    quantities(
        cfg,
        vec![
            QuantityRow::new(format!("S_{label}({})", cfg.n), &s, provenance),
            QuantityRow::new(format!("zeta_{label}({})", cfg.n + 1), zeta, Provenance::Computed),
        ],
    )
}

fn main_term(cfg: &RunConfig) -> Res<Output> {
    let sys = system(cfg)?;
    let vol = sys.volume()?;
    let main = main_term_constant(&sys, cfg.tol)?;
    let label = sys.field.label();
    let v_name = match &vol.exact {
        Some(m) => format!("V={m}"),
        None => "V".to_string(),
    };
    quantities(
        cfg,
        vec![
            QuantityRow::new(v_name, &vol.enclosure, vol.provenance),
            QuantityRow::new(format!("main_term_{label}({})", sys.n), &main, vol.provenance),
        ],
    )
}

fn ce_sum(cfg: &RunConfig) -> Res<Output> {
    let delta_max = cfg.scan.unwrap_or(1000);
    let sum = ce_partial_sum(cfg.n, delta_max, cfg.tol)?;
    let cert = certify_hr_bound(cfg.certify);
    let mut rows: Vec<QuantityRow> = sum
        .terms
        .iter()
        .map(|(d, s)| QuantityRow::new(format!("S_K({}) disc={d}", cfg.n), s, Provenance::Computed))
        .collect();
    rows.push(
        QuantityRow::new(format!("partial_sum({}) delta_max={delta_max}", cfg.n), &sum.partial, Provenance::Computed)
            .with_tail(sum.tail.hi_f64()),
    );
    let ratio = Real::exact(BigRational::from_float(cert.max_ratio).unwrap_or_default());
    rows.push(QuantityRow::new(
        format!(
            "hR_over_sqrtD_log_bound max_ratio argmax={} d_max={} c0={} holds={}",
            cert.argmax, cert.d_max, cert.c0, cert.holds
        ),
        &ratio,
        Provenance::Computed,
    ));
    quantities(cfg, rows)
}

fn count_report(cfg: &RunConfig) -> Res<CountReport> {
    let grid = cfg.grid_values();
    let sched = schedule(cfg);
    Ok(match cfg.subcommand.as_str() {
        "count-rational" => census::rational_report(cfg.n, &grid, &sched, cfg.tol)?,
        "count-field" => census::field_report(&field(cfg)?, cfg.n, &grid, &sched, cfg.tol)?,
        "count-primitive" => census::primitive_report(&field(cfg)?, cfg.n, &grid, &sched, cfg.tol)?,
        _ => census::quadratic_p1_report(&grid, &sched, cfg.tol)?,
    })
}

fn count(cfg: &RunConfig) -> Res<Output> {
    let report = count_report(cfg)?;
    let mut csv = report.to_csv()?;
    csv.push_str(&match &report.fit {
        Some(f) => format!(
            "# fit slope={} intercept={} expected={} flagged={}\n",
            f.slope, f.intercept, f.expected, f.flagged
        ),
        None => "# fit slope=none\n".to_string(),
    });
    let json: Value = serde_json::from_str(&report.to_json()?).map_err(|e| Failure::Io(e.to_string()))?;
    Ok(Output { csv, json })
}

/// A cap that already exceeds `H(1, omega)` for quadratic fields.
fn default_cap(k: &Field) -> BigRational {
    let d = k.disc().unsigned_abs();
    let c = ((d / 4 + 2) as f64).sqrt().ceil() as i64 + 1;
    BigRational::from_integer(c.into())
}

fn delta(cfg: &RunConfig) -> Res<Output> {
    let k = field(cfg)?;
    let mut cap = cfg.cap_value().unwrap_or_else(|| default_cap(&k));
    let entry = loop {
        match census::delta_of_field(&k, &cap) {
            Err(heightcount::Error::CapTooSmall { .. }) if cfg.cap.is_none() => cap *= BigRational::from_integer(2.into()),
            r => break r?,
        }
    };
    let (a, b, c) = entry.minpoly;
    let row = vec![
        k.label(),
        entry.disc.to_string(),
        entry.delta_squared().to_string(),
        entry.delta.enclosure.mid_f64().to_string(),
        a.to_string(),
        b.to_string(),
        c.to_string(),
        k.element_to_string(&entry.witness),
    ];
    table(
        cfg,
        &["field", "disc", "delta_squared", "delta_mid", "a", "b", "c", "witness"],
        vec![row],
        json!({ "cap": cap.to_string() }),
    )
}

fn n_delta(cfg: &RunConfig) -> Res<Output> {
    let grid = cfg.grid_values();
    let sched = schedule(cfg);
    let mut rows = Vec::new();
    let mut fields = Vec::new();
    for t in &grid {
        let t4 = t * t * t * t * BigRational::from_integer(4.into());
        let scan = cfg.scan.unwrap_or_else(|| t4.ceil().to_integer().to_u64().unwrap_or(u64::MAX));
        let r = census::n_delta(t, scan, &sched)?;
        rows.push(vec![r.t.clone(), r.count.to_string(), r.delta_scan.to_string(), r.required_scan.clone()]);
        fields.push(json!({ "T": r.t, "fields": r.fields }));
    }
    table(cfg, &["T", "count", "delta_scan", "required_scan"], rows, json!(fields))
}

fn n_disc(cfg: &RunConfig) -> Res<Output> {
    let mut rows = Vec::new();
    for t in cfg.grid_values() {
        let t = t.to_integer().to_u64().ok_or_else(|| Failure::Usage("T too large".into()))?;
        rows.push(vec![t.to_string(), census::n_disc(t)?.to_string()]);
    }
    table(cfg, &["T", "count"], rows, Value::Null)
}

fn lemma_check(cfg: &RunConfig) -> Res<Output> {
    let r = exponent_check(cfg.m, cfg.e)?;
    let rows = r
        .rows
        .iter()
        .map(|(g, slack)| {
            vec![
                r.m.to_string(),
                r.e.to_string(),
                r.n.to_string(),
                g.to_string(),
                slack.to_string(),
                r.passed.to_string(),
            ]
        })
        .collect();
    let summary = json!({
        "passed": r.passed,
        "integrality_step": r.integrality_step,
        "schmidt_upper_exponent": schmidt_upper_exponent(cfg.m, cfg.e, cfg.n as u32),
    });
    table(cfg, &["m", "e", "n", "g", "slack", "passed"], rows, summary)
}

fn bounds_check(cfg: &RunConfig) -> Res<Output> {
    let k = field(cfg)?;
    let b = discriminant_bounds(&k, PREC)?;
    let entry = census::delta_of_field(&k, &default_cap(&k))?;
    let exact = entry.delta.exact.as_ref().expect("exact height");
    let holds = b.brackets(exact);
    let scan = cfg.scan.unwrap_or(2000);
    let records: Vec<FieldInvariants> = fundamental_discriminants(scan)
        .into_iter()
        .map(|d| Field::parse(&heightcount::arith::squarefree_of_discriminant(d).expect("fundamental").to_string()))
        .map(|f| f.map(|f| FieldInvariants::compute(&f)))
        .collect::<Result<_, _>>()?;
    let sb = siegel_brauer_scan(&records, cfg.epsilon)?;
    let flag = |b: bool| Real::from_int(b as i64);
    let rows = vec![
        QuantityRow::new(format!("silverman_lower disc={}", b.disc), &b.silverman_lower, Provenance::Computed),
        QuantityRow::new("delta", &entry.delta.enclosure, Provenance::Computed),
        QuantityRow::new("delta_upper", &b.delta_upper.to_real(PREC), Provenance::Computed),
        QuantityRow::new("bracket_holds", &flag(holds), Provenance::Computed),
        QuantityRow::new(
            format!("hR_ratio_max eps={} argmax={} fields={}", sb.epsilon, sb.argmax, sb.fields),
            &Real::exact(BigRational::from_float(sb.max_ratio).unwrap_or_default()),
            Provenance::MeasuredEnvelope,
        ),
        QuantityRow::new(
            "hR_slope",
            &Real::exact(BigRational::from_float(sb.slope.unwrap_or(f64::NAN)).unwrap_or_default()),
            Provenance::MeasuredEnvelope,
        ),
        QuantityRow::new("hR_slope_ok", &flag(sb.slope_ok), Provenance::MeasuredEnvelope),
    ];
    quantities(cfg, rows)
}

fn volumes(cfg: &RunConfig) -> Res<Output> {
    let sys = system(cfg)?;
    let fin = sys.v_fin()?;
    let inf = sys.v_inf();
    let vol = sys.volume()?;
    let named = |name: &str, exact: Option<String>| match exact {
        Some(e) => format!("{name}={e}"),
        None => name.to_string(),
    };
    let mut rows = vec![
        QuantityRow::new(format!("V_fin={fin}"), &Real::exact(fin.clone()), Provenance::Computed),
        QuantityRow::new(named("V_inf", inf.exact.as_ref().map(|m| m.to_string())), &inf.enclosure, inf.provenance),
        QuantityRow::new(named("V", vol.exact.as_ref().map(|m| m.to_string())), &vol.enclosure, vol.provenance),
    ];
    for d in class_representatives(&sys.field) {
        let inv = sys.class_invariant(&d);
        rows.push(QuantityRow::new(
            format!("Delta_N[{d}]={inv}"),
            &inv.to_real(PREC),
            Provenance::Computed,
        ));
    }
    quantities(cfg, rows)
}

fn example(cfg: &RunConfig) -> Res<Output> {
    let path = cfg.invariants.as_ref().expect("validated");
    let records = parse_invariants(&read(path)?)?;
    let d = example_d(&records, PREC)?;
    let coefficient = d.coefficient.to_real(PREC);
    let mut rows = vec![QuantityRow::new(
        format!("coefficient={}", d.coefficient),
        &coefficient,
        Provenance::Computed,
    )];
    for (label, t) in &d.terms {
        rows.push(QuantityRow::new(format!("term[{label}]"), t, Provenance::Supplied));
    }
    rows.push(QuantityRow::new("partial_sum", &d.partial, Provenance::Supplied));
    rows.push(QuantityRow::new("D", &d.value, Provenance::Supplied));
    quantities(cfg, rows)
}
