//! Text output: CSV numbers and Graphviz DOT.

use std::fmt::Write;

use mlbcast::BroadcastPlan;

/// `x` with 15 significant digits, trailing zeros dropped, like C's `%.15g`.
pub fn sig15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.14e}", x);
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    if !(-5..15).contains(&exp) {
        let m = trim_fraction(mantissa);
        return format!(
            "{sign}{m}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        );
    }
    let fixed = if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        format!("{int}.{frac}")
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    format!("{sign}{}", trim_fraction(&fixed))
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One digraph per part; nodes are one-based and listed in increasing order,
/// edges in transmission order and labelled with the part's weight.
pub fn plan_to_dot(plan: &BroadcastPlan) -> String {
    let mut out = String::new();
    for (r, part) in plan.parts().iter().enumerate() {
        let weight = sig15(part.weight);
        let mut nodes: Vec<usize> = part.edges.iter().flat_map(|&(i, j)| [i, j]).collect();
        nodes.push(plan.source());
        nodes.sort_unstable();
        nodes.dedup();
        if r > 0 {
            out.push('\n');
        }
        writeln!(out, "digraph part{} {{", r + 1).unwrap();
        writeln!(out, "  label=\"part {}, weight {weight}\";", r + 1).unwrap();
        for v in nodes {
            if v == plan.source() {
                writeln!(out, "  {} [shape=doublecircle];", v + 1).unwrap();
            } else {
                writeln!(out, "  {};", v + 1).unwrap();
            }
        }
        for &(i, j) in &part.edges {
            writeln!(out, "  {} -> {} [label=\"{weight}\"];", i + 1, j + 1).unwrap();
        }
        out.push_str("}\n");
    }
    out
}
