//! CSV files: aggregated regret curves and the per-arm bounds table.
//!
//! Reals are written like C's `%.17g`, which round-trips every `f64`.
//! Files are UTF-8 with LF line endings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::bandit::{BanditInstance, PriorSpec};
use crate::engine::AggregateCurve;
use crate::error::{Error, Result};
use crate::theory::{pulls_lower_bound, suboptimal_bound_inputs};

pub const CURVE_HEADER: &str = "policy,t,mean_regret,sem,runs";
pub const BOUNDS_HEADER: &str = "arm,gap,pulls_lb,regret_contribution";

/// `%.17g`.
pub fn format_g17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn render_curves(curves: &BTreeMap<String, AggregateCurve>) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::InvalidArgument("no curves to write".into()));
    }
    let mut out = String::new();
    out.push_str(CURVE_HEADER);
    out.push('\n');
    // BTreeMap iteration orders by policy; checkpoints are ascending.
    for (policy, c) in curves {
        if policy.contains(',') || policy.contains('\n') {
            return Err(Error::InvalidArgument(format!(
                "policy id `{policy}` cannot be written unquoted"
            )));
        }
        for i in 0..c.checkpoints.len() {
            writeln!(
                out,
                "{policy},{},{},{},{}",
                c.checkpoints[i],
                format_g17(c.mean_regret[i]),
                format_g17(c.sem[i]),
                c.runs
            )
            .expect("writing to a String");
        }
    }
    Ok(out)
}

pub fn emit_csv(curves: &BTreeMap<String, AggregateCurve>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = render_curves(curves)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_curves(text: &str, path: &Path) -> Result<BTreeMap<String, AggregateCurve>> {
    let err = |line: usize, message: String| Error::Csv {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CURVE_HEADER => {}
        Some((_, h)) => return Err(err(1, format!("expected header `{CURVE_HEADER}`, found `{h}`"))),
        None => return Err(err(1, "empty file".into())),
    }
    let mut curves: BTreeMap<String, AggregateCurve> = BTreeMap::new();
    for (i, line) in lines {
        let n = i + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(err(n, format!("expected 5 fields, found {}", fields.len())));
        }
        let t: u64 = fields[1]
            .parse()
            .map_err(|e| err(n, format!("column t: {e}")))?;
        let mean: f64 = fields[2]
            .parse()
            .map_err(|e| err(n, format!("column mean_regret: {e}")))?;
        let sem: f64 = fields[3]
            .parse()
            .map_err(|e| err(n, format!("column sem: {e}")))?;
        let runs: u64 = fields[4]
            .parse()
            .map_err(|e| err(n, format!("column runs: {e}")))?;
        let c = curves
            .entry(fields[0].to_string())
            .or_insert_with(|| AggregateCurve {
                checkpoints: vec![],
                mean_regret: vec![],
                sem: vec![],
                runs,
            });
        if c.runs != runs {
            return Err(err(n, "runs differs within one policy".into()));
        }
        if c.checkpoints.last().is_some_and(|&prev| prev >= t) {
            return Err(err(n, "checkpoints must be strictly ascending".into()));
        }
        c.checkpoints.push(t);
        c.mean_regret.push(mean);
        c.sem.push(sem);
    }
    Ok(curves)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<BTreeMap<String, AggregateCurve>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_curves(&text, path)
}

/// One row of the bounds table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    /// 1-based arm label.
    pub arm: usize,
    pub gap: f64,
    pub pulls_lb: f64,
    pub regret_contribution: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsTable {
    pub rows: Vec<BoundRow>,
    pub total_pulls: f64,
    pub total_regret: f64,
}

pub fn bounds_table(instance: &BanditInstance, prior: &PriorSpec, horizon: u64) -> Result<BoundsTable> {
    let mut rows = Vec::new();
    for (k, inp) in suboptimal_bound_inputs(instance, prior, horizon)? {
        let gap = inp.mu_star - inp.mu_k;
        let pulls_lb = pulls_lower_bound(&inp)?;
        rows.push(BoundRow {
            arm: k + 1,
            gap,
            pulls_lb,
            regret_contribution: gap * pulls_lb,
        });
    }
    Ok(BoundsTable {
        total_pulls: rows.iter().map(|r| r.pulls_lb).sum(),
        total_regret: rows.iter().map(|r| r.regret_contribution).sum(),
        rows,
    })
}

impl BoundsTable {
    /// Header, one row per suboptimal arm, then `total,,<pulls>,<regret>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(BOUNDS_HEADER);
        out.push('\n');
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.arm,
                format_g17(r.gap),
                format_g17(r.pulls_lb),
                format_g17(r.regret_contribution)
            )
            .expect("writing to a String");
        }
        writeln!(
            out,
            "total,,{},{}",
            format_g17(self.total_pulls),
            format_g17(self.total_regret)
        )
        .expect("writing to a String");
        out
    }
}
