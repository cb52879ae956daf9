//! Standalone matplotlib scripts for a written bundle. The script sits next
//! to the CSV and resolves it relative to its own location.

use crate::bundle::ResultBundle;
use crate::error::{CliError, CliResult};

const LOADER: &str = r#"import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent


def load(name):
    with open(HERE / name, newline="") as f:
        rows = list(csv.reader(f))
    names = [h.split(" [")[0] for h in rows[0]]
    return {n: [float(r[i]) for r in rows[1:]] for i, n in enumerate(names)}
"#;

fn py_str(s: &str) -> String {
    format!("{s:?}")
}

pub fn emit_plot_script(bundle: &ResultBundle) -> CliResult<String> {
    let table = bundle
        .primary()
        .filter(|t| t.rows() > 0 && !t.columns.is_empty())
        .ok_or_else(|| CliError::Plot(format!("{}: nothing to plot", bundle.experiment)))?;
    let csv_name = format!("{}.csv", bundle.experiment);
    let png_name = format!("{}.png", bundle.experiment);
    let y = ["jz_scaled", "jz_mean"].into_iter().find(|c| table.column(c).is_some());

    let mut body = String::new();
    body.push_str(&format!("data = load({})\nfig, ax = plt.subplots(figsize=(6, 4))\n", py_str(&csv_name)));
    match (table.column("ratio"), y) {
        (Some(_), Some(y)) => {
            let sd = if table.column("jz_sd").is_some() { "yerr=[d[\"jz_sd\"][i] for i in idx], " } else { "" };
            if table.column("n_qubits").is_some() {
                body.push_str(&format!(
                    "for n in sorted(set(data[\"n_qubits\"])):\n    idx = [i for i, v in enumerate(data[\"n_qubits\"]) if v == n]\n    d = data\n    ax.errorbar([d[\"ratio\"][i] for i in idx], [d[{y:?}][i] for i in idx], {sd}label=f\"N = {{int(n)}}\")\nax.legend()\n"
                ));
            } else {
                body.push_str(&format!(
                    "d = data\nidx = range(len(d[\"ratio\"]))\nax.errorbar(d[\"ratio\"], d[{y:?}], {sd}lw=1.2)\n"
                ));
            }
            body.push_str(&format!(
                "ax.axvline(1.0, color=\"k\", ls=\"--\", lw=0.8)\nax.set_xlabel(\"λ/λc\")\nax.set_ylabel({})\n",
                py_str(&format!("{y} [1]"))
            ));
        }
        _ => {
            let x = &table.columns[0];
            body.push_str(&format!("x = data[{}]\n", py_str(&x.name)));
            for c in &table.columns[1..] {
                body.push_str(&format!(
                    "ax.plot(x, data[{}], marker=\"o\", label={})\n",
                    py_str(&c.name),
                    py_str(&c.header())
                ));
            }
            body.push_str(&format!("ax.set_xlabel({})\nax.legend()\n", py_str(&x.header())));
        }
    }
    body.push_str(&format!(
        "ax.set_title({})\nfig.tight_layout()\nfig.savefig(HERE / {}, dpi=150)\n",
        py_str(&bundle.experiment),
        py_str(&png_name)
    ));
    Ok(format!("#!/usr/bin/env python3\n\"\"\"Plot {csv_name}.\"\"\"\n{LOADER}\n\n{body}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::Table;

    fn bundle(experiment: &str, table: Table) -> ResultBundle {
        ResultBundle { experiment: experiment.into(), meta: Vec::new(), tables: vec![table] }
    }

    #[test]
    fn sweep_script_marks_critical_ratio() {
        let t = Table::new("t").with("ratio", "1", vec![0.5, 1.0]).with("jz_scaled", "1", vec![-1.0, -0.8]);
        let s = emit_plot_script(&bundle("sweep", t)).unwrap();
        assert!(s.contains("axvline(1.0"));
        assert!(s.contains("load(\"sweep.csv\")"));
        assert!(!s.contains("/root") && !s.contains("C:\\"));
    }

    #[test]
    fn one_curve_per_qubit_count() {
        let t = Table::new("t")
            .with("n_qubits", "1", vec![2.0, 4.0])
            .with("ratio", "1", vec![0.5, 0.5])
            .with("jz_scaled", "1", vec![-1.0, -1.0]);
        assert!(emit_plot_script(&bundle("ground-scan", t)).unwrap().contains("for n in sorted(set(data[\"n_qubits\"]))"));
    }

    #[test]
    fn empty_bundle_is_an_error() {
        assert!(emit_plot_script(&bundle("sweep", Table::new("t"))).is_err());
        let none = ResultBundle { experiment: "sweep".into(), meta: Vec::new(), tables: Vec::new() };
        assert!(emit_plot_script(&none).is_err());
    }
}
