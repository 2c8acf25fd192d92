use causalchop::chop::multi::{table_for, verify_chopping, Certificate, ChopOptions, Chopping, ChoppingReport};
use causalchop::chop::two::TwoChopResult;
use causalchop::chop::{chop_n, chop_two};
use causalchop::minkowski::{causal_class, span_class};
use causalchop::rational;
use causalchop::wick::{string_stratum, t_product_closed, t_product_recursive, WickExpression};
use causalchop::{compare, Error, Region, StringGeom};
use serde_json::{json, Value};

use crate::config::ConfigFile;

/// Outcome of a command: the report payload plus an optional verification verdict.
pub struct Output {
    pub outputs: Value,
    pub verified: Option<bool>,
}

/// Failures mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Diagonal(String),
    RefinementLimit(String),
    Verification(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Diagonal(_) => 2,
            Failure::RefinementLimit(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Diagonal(m) | Failure::RefinementLimit(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::OnDiagonal { .. } | Error::NotDisjoint | Error::OverlappingRegions { .. } => Failure::Diagonal(msg),
            Error::RefinementLimitExceeded { .. } => Failure::RefinementLimit(msg),
            Error::InternalVerificationFailure(_) | Error::InvalidChopping(_) => Failure::Verification(msg),
            _ => Failure::Usage(msg),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn check_pair(cfg: &ConfigFile, (i, j): (usize, usize)) -> Result<(), Failure> {
    let n = cfg.strings.len();
    if i >= n || j >= n {
        return Err(Failure::Usage(format!("--pair {i} {j}: configuration has {n} strings")));
    }
    if i == j {
        return Err(Failure::Usage(format!("--pair {i} {j}: indices must differ")));
    }
    Ok(())
}

fn default_pair(cfg: &ConfigFile, pair: Option<(usize, usize)>) -> Result<(usize, usize), Failure> {
    let pair = match pair {
        Some(p) => p,
        None if cfg.strings.len() == 2 => (0, 1),
        None => return Err(Failure::Usage("--pair I J is required unless the configuration has two strings".into())),
    };
    check_pair(cfg, pair)?;
    Ok(pair)
}

pub fn classify(cfg: &ConfigFile) -> Result<Output, Failure> {
    let n = cfg.strings.len();
    let classes: Vec<Value> = cfg.strings.iter().map(|s| to_json(&causal_class(&s.dir))).collect();
    let mut spans = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let span = span_class(&cfg.strings[i].dir, &cfg.strings[j].dir)?;
            spans.push(json!({"pair": [i, j], "span": span}));
        }
    }
    let regions: Vec<Region> = cfg.strings.iter().map(Region::string).collect();
    let matrix: Vec<Vec<Value>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, compare(&regions[i], &regions[j])) {
                    (true, _) => Value::Null,
                    (false, Ok(r)) => to_json(&r),
                    (false, Err(_)) => json!("Overlapping"),
                })
                .collect()
        })
        .collect();
    Ok(Output {
        outputs: json!({"direction_classes": classes, "span_classes": spans, "compare": matrix}),
        verified: None,
    })
}

/// Chopping and latest table equivalent to a two-string result, on `[s, s']`.
fn pair_chopping(result: &TwoChopResult) -> Chopping {
    match result {
        TwoChopResult::Cut { cut, .. } => {
            Chopping::from_rationals(&[vec![rational::int(0), cut.clone()], vec![rational::int(0)]])
        }
        TwoChopResult::NoChopNeeded { .. } => Chopping::trivial(2),
    }
}

fn verify_pair(pair: &[StringGeom; 2], result: &TwoChopResult) -> Result<(bool, Value), Failure> {
    let direct = result.verify(&pair[0], &pair[1]);
    let chopping = pair_chopping(result);
    let report = match table_for(pair, &chopping)? {
        Some(table) => verify_chopping(pair, &chopping, &table),
        None => return Ok((false, json!({"direct": direct, "table": "no latest member on some tuple"}))),
    };
    Ok((direct && report.all_pass, json!({"direct": direct, "chopping": chopping, "report": report})))
}

pub fn chop(cfg: &ConfigFile, pair: Option<(usize, usize)>, opts: &ChopOptions) -> Result<Output, Failure> {
    match pair {
        Some((i, j)) => {
            check_pair(cfg, (i, j))?;
            let strings = [cfg.strings[i].clone(), cfg.strings[j].clone()];
            let result = chop_two(&strings[0], &strings[1]).map_err(|e| match e {
                Error::NotDisjoint => Failure::Diagonal(format!("strings {i} and {j} intersect")),
                other => other.into(),
            })?;
            let (ok, verification) = verify_pair(&strings, &result)?;
            Ok(Output {
                outputs: json!({
                    "config": cfg.to_value(),
                    "pair": [i, j],
                    "result": result,
                    "verification": verification,
                }),
                verified: Some(ok),
            })
        }
        None => {
            let out = chop_n(&cfg.strings, opts)?;
            let report = verify_chopping(&cfg.strings, &out.chopping, &out.table);
            Ok(Output {
                outputs: json!({
                    "config": cfg.to_value(),
                    "certificate": out.certificate(),
                    "verification": report,
                }),
                verified: Some(report.all_pass),
            })
        }
    }
}

pub fn wick(cfg: &ConfigFile, mode: &str, opts: &ChopOptions) -> Result<Output, Failure> {
    let describe = |e: &WickExpression| json!({"expression": e, "text": e.to_string(), "terms": e.len()});
    match mode {
        "closed" | "recursive" => {
            let e = if mode == "closed" {
                t_product_closed(&cfg.strings)?
            } else {
                t_product_recursive(&cfg.strings, opts)?
            };
            let mut out = describe(&e);
            out["mode"] = json!(mode);
            out["config"] = cfg.to_value();
            Ok(Output { outputs: out, verified: None })
        }
        "compare" => {
            let closed = t_product_closed(&cfg.strings)?;
            let recursive = t_product_recursive(&cfg.strings, opts)?;
            let equal = closed == recursive;
            Ok(Output {
                outputs: json!({
                    "mode": "compare",
                    "config": cfg.to_value(),
                    "closed": describe(&closed),
                    "recursive": describe(&recursive),
                    "equal": equal,
                }),
                verified: Some(equal),
            })
        }
        other => Err(Failure::Usage(format!("unknown mode {other:?}"))),
    }
}

pub fn stratum(cfg: &ConfigFile, pair: Option<(usize, usize)>) -> Result<Output, Failure> {
    let (i, j) = default_pair(cfg, pair)?;
    let st = string_stratum(&cfg.strings[i], &cfg.strings[j]);
    Ok(Output {
        outputs: json!({"pair": [i, j], "stratum": st.name(), "codimension": st.codimension()}),
        verified: None,
    })
}

fn parse_json<T: serde::de::DeserializeOwned>(v: &Value, path: &str) -> Result<T, Failure> {
    serde_json::from_value(v.clone()).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

/// Re-checks a report written by `chop` or `wick`.
pub fn verify(doc: &Value) -> Result<Output, Failure> {
    let body = doc.get("outputs").unwrap_or(doc);
    let config = body
        .get("config")
        .ok_or_else(|| Failure::Usage("config: missing field; expected a chop or wick report".into()))?;
    let cfg = ConfigFile::from_value(config).map_err(|e| Failure::Usage(format!("config.{e}")))?;
    if let Some(cert) = body.get("certificate") {
        let cert: Certificate = parse_json(cert, "certificate")?;
        let chopping = Chopping { cuts: cert.cuts.clone() };
        let report: ChoppingReport = verify_chopping(&cfg.strings, &chopping, &cert.latest);
        return Ok(Output {
            verified: Some(report.all_pass),
            outputs: json!({"kind": "chopping", "verification": report}),
        });
    }
    if let (Some(pair), Some(result)) = (body.get("pair"), body.get("result")) {
        let (i, j): (usize, usize) = parse_json(pair, "pair")?;
        check_pair(&cfg, (i, j))?;
        let result: TwoChopResult = parse_json(result, "result")?;
        let (ok, verification) = verify_pair(&[cfg.strings[i].clone(), cfg.strings[j].clone()], &result)?;
        return Ok(Output { verified: Some(ok), outputs: json!({"kind": "pair", "verification": verification}) });
    }
    let closed = t_product_closed(&cfg.strings)?;
    let mut checked = Vec::new();
    for key in ["expression", "closed", "recursive"] {
        let found = match body.get(key) {
            Some(v) if key == "expression" => v,
            Some(v) => v.get("expression").ok_or_else(|| Failure::Usage(format!("{key}.expression: missing field")))?,
            None => continue,
        };
        let e: WickExpression = parse_json(found, key)?;
        checked.push(json!({"field": key, "matches_closed_form": e == closed}));
    }
    if checked.is_empty() {
        return Err(Failure::Usage("expected a certificate, a pair result or a Wick expression".into()));
    }
    let ok = checked.iter().all(|c| c["matches_closed_form"] == json!(true));
    Ok(Output { verified: Some(ok), outputs: json!({"kind": "wick", "verification": checked}) })
}
