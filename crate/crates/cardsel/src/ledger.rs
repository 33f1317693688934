//! Formula ledger: a markdown table generated from the formula registry and
//! the results of the size checks.

use std::fmt::Write as _;

use crate::formulas::REGISTRY;
use crate::verify::SizeCheck;

/// Ledger status of one formula over the given checks.
pub fn formula_status(name: &str, checks: &[SizeCheck]) -> String {
    let mine: Vec<&SizeCheck> = checks.iter().filter(|c| c.formula == name).collect();
    if mine.is_empty() {
        return "not checked".into();
    }
    let failed = mine.iter().filter(|c| !c.passed()).count();
    if failed == 0 {
        format!("pass ({} points)", mine.len())
    } else {
        format!("FAIL ({failed} of {} points)", mine.len())
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Markdown document with one row per registered formula.
pub fn formula_ledger(checks: &[SizeCheck]) -> String {
    let mut out = String::new();
    out.push_str("# Formula ledger\n\n");
    out.push_str("Generated by `cardsel ledger` from the formula registry and the `verify --suite sizes` checks. ");
    out.push_str("Do not edit by hand.\n\n");
    out.push_str("`log` is the base-2 logarithm. Approximate formulas are compared with a 10% relative tolerance.\n\n");
    out.push_str("| name | parameters | closed form | domain | counts | kind | status |\n");
    out.push_str("|---|---|---|---|---|---|---|\n");
    for f in REGISTRY {
        writeln!(
            out,
            "| `{}` | {} | `{}` | {} | {} | {} | {} |",
            f.name,
            f.params.join(", "),
            cell(f.expr),
            cell(f.domain),
            cell(f.counts),
            f.kind.label(),
            formula_status(f.name, checks)
        )
        .unwrap();
    }
    out.push_str("\n## Checked points\n\n");
    out.push_str("| name | parameters | counted | closed form | result |\n");
    out.push_str("|---|---|---|---|---|\n");
    for c in checks {
        let params = c.params.iter().map(i64::to_string).collect::<Vec<_>>().join(", ");
        let result = if c.passed() { "pass" } else { "FAIL" };
        writeln!(out, "| `{}` | {} | {} | {} | {} |", c.formula, params, c.counted, c.expected, result).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::size_checks;

    #[test]
    fn one_row_per_formula() {
        let doc = formula_ledger(&size_checks());
        for f in REGISTRY {
            assert!(doc.contains(&format!("| `{}` |", f.name)), "{}", f.name);
        }
        let oe = doc.lines().find(|l| l.starts_with("| `oe_sort_size`")).unwrap();
        assert!(oe.contains("n/4 * log n * (log n - 1) + n - 1") && oe.contains("pass"));
        let bound = doc.lines().find(|l| l.starts_with("| `oe4_merge_vars_bound`")).unwrap();
        assert!(bound.contains("(k - 2) log k + 5k - 1") && bound.contains("upper bound"));
        let table = doc.lines().find(|l| l.starts_with("| `fourw_merge_sorters2`")).unwrap();
        assert!(table.contains("approximate (floors omitted)"));
    }
}
