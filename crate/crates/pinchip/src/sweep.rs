//! Parameter sweeps over a config tree.
//!
//! A parameter path is dotted: table keys, plus array elements addressed by
//! their `name` field or by index (`lines.pin-small.outer_diameter`,
//! `wiring.0.wire_pitch`). The field must already be present in the config.
//! `start`/`stop` are unit strings for dimensional fields and plain numbers
//! otherwise. Points are evaluated in parallel and written in sweep order.
//!
//! CSV columns: `index`, one column per swept parameter (SI value), then the
//! report columns:
//!
//! | report      | columns                                                            |
//! |-------------|--------------------------------------------------------------------|
//! | `scale`     | per wiring: `<name>.qubits`, `.qubits_exact`, `.wires`, `.wires_exact`, `.limiting_factor` |
//! | `impedance` | per line: `<name>.impedance_ohm`, `<name>.effective_permittivity`  |
//! | `rf`        | `worst_s11`, `worst_s11_db`, `worst_frequency_hz`, `first_minimum_hz` |
//! | `budget`    | per stage: `<stage>.total_w`, `<stage>.feasible`                   |
//! | `layout`    | `sites`, `drc_errors`, `drc_warnings`, `drc_rules`                 |

use pinchip_core::materials::MaterialCatalog;
use rayon::prelude::*;

use crate::analysis;
use crate::config::{from_tree, Design, LoadedConfig, ReportKind, SweepSection};
use crate::error::{CliError, Result};
use crate::formats::num;
use crate::formats::table::Table;
use crate::units::{parse_any, split_quantity};

/// One axis of a sweep: a path and its values as `(SI number, TOML value)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub parameter: String,
    pub values: Vec<(f64, toml::Value)>,
}

fn interpolate(a: f64, b: f64, steps: usize, i: usize) -> f64 {
    if steps == 1 || i == 0 {
        a
    } else if i + 1 == steps {
        b
    } else {
        a + (b - a) * (i as f64) / ((steps - 1) as f64)
    }
}

fn as_number(v: &toml::Value) -> Option<f64> {
    match v {
        toml::Value::Integer(i) => Some(*i as f64),
        toml::Value::Float(f) => Some(*f),
        _ => None,
    }
}

/// Values for one axis. `field` is used in error paths.
pub fn axis_values(
    field: &str,
    start: &toml::Value,
    stop: &toml::Value,
    steps: usize,
) -> Result<Vec<(f64, toml::Value)>> {
    if steps == 0 {
        return Err(CliError::config(
            format!("{field}.steps"),
            "sweep needs at least one point",
        ));
    }
    match (start, stop) {
        (toml::Value::String(a), toml::Value::String(b)) => {
            let (va, da, si) = parse_any(a).map_err(|e| CliError::config(format!("{field}.start"), e))?;
            let (vb, db, _) = parse_any(b).map_err(|e| CliError::config(format!("{field}.stop"), e))?;
            if da != db {
                return Err(CliError::config(
                    format!("{field}.stop"),
                    format!("is a {db} but start is a {da}"),
                ));
            }
            if !(va.is_finite() && vb.is_finite()) {
                return Err(CliError::config(field, "range must be finite"));
            }
            // Same suffix on both ends: step in that unit so points read as
            // typed ("14mm" rather than "0.013999999999999999m").
            let (ra, ua) = split_quantity(a).map_err(|e| CliError::config(format!("{field}.start"), e))?;
            let (rb, ub) = split_quantity(b).map_err(|e| CliError::config(format!("{field}.stop"), e))?;
            (0..steps)
                .map(|i| {
                    let text = if ua == ub {
                        format!("{}{ua}", interpolate(ra, rb, steps, i))
                    } else {
                        format!("{}{si}", interpolate(va, vb, steps, i))
                    };
                    let (v, _, _) = parse_any(&text).map_err(|e| CliError::config(field, e))?;
                    Ok((v, toml::Value::String(text)))
                })
                .collect()
        }
        _ => {
            let a = as_number(start)
                .ok_or_else(|| CliError::config(format!("{field}.start"), "expected a number or unit string"))?;
            let b = as_number(stop).ok_or_else(|| {
                CliError::config(format!("{field}.stop"), "expected a number of the same kind as start")
            })?;
            if !(a.is_finite() && b.is_finite()) {
                return Err(CliError::config(field, "range must be finite"));
            }
            let integers = matches!((start, stop), (toml::Value::Integer(_), toml::Value::Integer(_)));
            (0..steps)
                .map(|i| {
                    let v = interpolate(a, b, steps, i);
                    if integers {
                        if v.fract() != 0.0 {
                            return Err(CliError::config(
                                format!("{field}.steps"),
                                "integer range does not divide evenly into the requested steps",
                            ));
                        }
                        Ok((v, toml::Value::Integer(v as i64)))
                    } else {
                        Ok((v, toml::Value::Float(v)))
                    }
                })
                .collect()
        }
    }
}

/// Mutable reference to the value at `path`.
pub fn lookup_mut<'a>(tree: &'a mut toml::Value, path: &str) -> Option<&'a mut toml::Value> {
    let mut node = tree;
    for seg in path.split('.') {
        node = match node {
            toml::Value::Table(t) => t.get_mut(seg)?,
            toml::Value::Array(items) => {
                if let Ok(i) = seg.parse::<usize>() {
                    items.get_mut(i)?
                } else {
                    items
                        .iter_mut()
                        .find(|v| v.get("name").and_then(|n| n.as_str()) == Some(seg))?
                }
            }
            _ => return None,
        };
    }
    Some(node)
}

fn set(tree: &mut toml::Value, field: &str, path: &str, value: &toml::Value) -> Result<()> {
    let slot = lookup_mut(tree, path).ok_or_else(|| {
        CliError::config(
            format!("{field}.parameter"),
            format!("unknown parameter `{path}` (the field must be present in the config)"),
        )
    })?;
    let compatible = matches!(
        (&*slot, value),
        (toml::Value::String(_), toml::Value::String(_))
            | (
                toml::Value::Integer(_) | toml::Value::Float(_),
                toml::Value::Integer(_) | toml::Value::Float(_)
            )
    );
    if !compatible {
        return Err(CliError::config(
            format!("{field}.parameter"),
            format!(
                "`{path}` holds a {} but the sweep range is a {}",
                slot.type_str(),
                value.type_str()
            ),
        ));
    }
    *slot = value.clone();
    Ok(())
}

/// Expands and checks a sweep declaration against the config tree.
pub fn axes(loaded: &LoadedConfig, index: usize) -> Result<Vec<Axis>> {
    let s = &loaded.raw.sweep[index];
    let field = format!("sweep[{index}]");
    let mut out = vec![Axis {
        parameter: s.parameter.clone(),
        values: axis_values(&field, &s.start, &s.stop, s.steps)?,
    }];
    for (k, l) in s.linked.iter().enumerate() {
        let lf = format!("{field}.linked[{k}]");
        out.push(Axis {
            parameter: l.parameter.clone(),
            values: axis_values(&lf, &l.start, &l.stop, s.steps)?,
        });
    }
    let mut probe = loaded.tree.clone();
    for (k, a) in out.iter().enumerate() {
        let f = if k == 0 {
            field.clone()
        } else {
            format!("{field}.linked[{}]", k - 1)
        };
        if a.parameter.starts_with("sweep") {
            return Err(CliError::config(
                format!("{f}.parameter"),
                "cannot sweep the sweep declarations",
            ));
        }
        set(&mut probe, &f, &a.parameter, &a.values[0].1)?;
    }
    Ok(out)
}

/// Checks every sweep declaration; run on every config load.
pub fn validate_all(loaded: &LoadedConfig) -> Result<()> {
    let mut names = std::collections::BTreeSet::new();
    for (i, s) in loaded.raw.sweep.iter().enumerate() {
        if !names.insert(s.name.as_str()) {
            return Err(CliError::config(
                format!("sweep[{i}].name"),
                format!("duplicate name `{}`", s.name),
            ));
        }
        axes(loaded, i)?;
    }
    Ok(())
}

pub fn select<'a>(loaded: &'a LoadedConfig, name: Option<&str>) -> Result<(usize, &'a SweepSection)> {
    let sweeps = &loaded.raw.sweep;
    match name {
        Some(n) => sweeps
            .iter()
            .enumerate()
            .find(|(_, s)| s.name == n)
            .ok_or_else(|| CliError::config("--name", format!("no sweep named `{n}`"))),
        None => match sweeps.len() {
            0 => Err(CliError::config("sweep", "no sweep declared in the config")),
            1 => Ok((0, &sweeps[0])),
            _ => Err(CliError::config(
                "--name",
                "config declares several sweeps; pick one with --name",
            )),
        },
    }
}

fn report_header(kind: ReportKind, base: &Design) -> Vec<String> {
    match kind {
        ReportKind::Scale => base
            .wiring
            .iter()
            .flat_map(|(n, _)| {
                ["qubits", "qubits_exact", "wires", "wires_exact", "limiting_factor"].map(|c| format!("{n}.{c}"))
            })
            .collect(),
        ReportKind::Impedance => base
            .lines
            .iter()
            .flat_map(|l| ["impedance_ohm", "effective_permittivity"].map(|c| format!("{}.{c}", l.name)))
            .collect(),
        ReportKind::Rf => ["worst_s11", "worst_s11_db", "worst_frequency_hz", "first_minimum_hz"]
            .map(String::from)
            .to_vec(),
        ReportKind::Budget => base
            .thermal
            .as_ref()
            .map(|t| {
                t.stages
                    .stages
                    .iter()
                    .flat_map(|s| ["total_w", "feasible"].map(|c| format!("{}.{c}", s.name)))
                    .collect()
            })
            .unwrap_or_default(),
        ReportKind::Layout => ["sites", "drc_errors", "drc_warnings", "drc_rules"]
            .map(String::from)
            .to_vec(),
    }
}

/// Report columns for one resolved design.
pub fn report_cells(kind: ReportKind, design: &Design, catalog: &MaterialCatalog) -> Result<Vec<String>> {
    Ok(match kind {
        ReportKind::Scale => analysis::scale(design)?
            .into_iter()
            .flat_map(|r| {
                [
                    r.report.qubits.to_string(),
                    num(r.report.qubits_exact),
                    r.report.wires.to_string(),
                    num(r.report.wires_exact),
                    r.report.limiting_factor.to_string(),
                ]
            })
            .collect(),
        ReportKind::Impedance => analysis::impedance(design)?
            .into_iter()
            .flat_map(|r| [num(r.impedance), num(r.effective_permittivity)])
            .collect(),
        ReportKind::Rf => {
            let r = analysis::rf(design)?;
            vec![
                num(r.worst_s11),
                num(r.worst_s11_db),
                num(r.worst_frequency),
                r.first_reflection_minimum.map(num).unwrap_or_default(),
            ]
        }
        ReportKind::Budget => analysis::budget(design, catalog)?
            .rows
            .into_iter()
            .flat_map(|r| [num(r.total), r.feasible.to_string()])
            .collect(),
        ReportKind::Layout => {
            let l = analysis::layout(design)?;
            let mut rules: Vec<String> = l.drc.findings.iter().map(|f| f.rule.to_string()).collect();
            rules.dedup();
            vec![
                l.layout.site_count().to_string(),
                l.drc.errors().count().to_string(),
                l.drc.warnings().count().to_string(),
                rules.join(";"),
            ]
        }
    })
}

pub fn run(loaded: &LoadedConfig, index: usize, catalog: &MaterialCatalog) -> Result<Table> {
    let sweep = &loaded.raw.sweep[index];
    let axes = axes(loaded, index)?;
    let base = loaded.raw.resolve(catalog)?;
    let mut header = vec!["index".to_string()];
    header.extend(axes.iter().map(|a| a.parameter.clone()));
    header.extend(report_header(sweep.report, &base));
    let field = format!("sweep[{index}]");

    let rows: Vec<Result<Vec<String>>> = (0..sweep.steps)
        .into_par_iter()
        .map(|i| {
            let mut tree = loaded.tree.clone();
            for a in &axes {
                set(&mut tree, &field, &a.parameter, &a.values[i].1)?;
            }
            let point_err = |e: CliError| CliError::analysis(format!("sweep `{}` point {i}", sweep.name), e);
            let design = from_tree(tree)
                .and_then(|raw| raw.resolve(catalog))
                .map_err(point_err)?;
            let mut row = vec![i.to_string()];
            row.extend(axes.iter().map(|a| num(a.values[i].0)));
            row.extend(report_cells(sweep.report, &design, catalog).map_err(point_err)?);
            Ok(row)
        })
        .collect();

    let mut table = Table::new(header);
    for r in rows {
        let r = r?;
        if r.len() != table.header.len() {
            return Err(CliError::analysis(
                format!("sweep `{}`", sweep.name),
                "swept parameter changed the report shape",
            ));
        }
        table.push(r);
    }
    Ok(table)
}
