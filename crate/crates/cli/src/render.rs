//! Text renderings shared by the subcommands. Every emitter iterates in the
//! library's canonical key order, so output is byte-stable.

use serde::Serialize;

use segrelat::{Basis, MultiSymFunc, Partition, QPoly};

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

fn parts(p: &Partition) -> String {
    p.parts()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// A t-tuple of partitions as `4,3|6,1`; the empty partition is `none`.
pub fn key(mus: &[Partition]) -> String {
    mus.iter()
        .map(|m| {
            if m.is_empty() {
                "none".to_string()
            } else {
                parts(m)
            }
        })
        .collect::<Vec<_>>()
        .join("|")
}

pub fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Rows `label,key,coeff` for each term.
pub fn multisym_csv_rows(label: &str, f: &MultiSymFunc, out: &mut String) {
    for (k, c) in f.terms() {
        out.push_str(&format!("{label},{},{c}\n", csv_quote(&key(k))));
    }
}

pub fn multisym_latex(f: &MultiSymFunc) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let letter = match f.basis() {
        Basis::Z => "h",
        Basis::S => "s",
    };
    let mut out = String::new();
    for (i, (k, c)) in f.terms().enumerate() {
        let negative = c < &num_rational::BigRational::from_integer(0.into());
        let abs = if negative { -c.clone() } else { c.clone() };
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if abs != num_rational::BigRational::from_integer(1.into()) {
            out.push_str(&abs.to_string());
        }
        let factors: Vec<String> = k
            .iter()
            .enumerate()
            .filter(|(_, mu)| !mu.is_empty())
            .map(|(j, mu)| format!("{letter}_{{({})}}(X^{})", parts(mu), j + 1))
            .collect();
        if factors.is_empty() {
            out.push('1');
        } else {
            out.push_str(&factors.join(""));
        }
    }
    out
}

pub fn qpoly_latex(p: &QPoly) -> String {
    p.to_string()
        .split(' ')
        .map(|tok| match tok.split_once("q^") {
            Some((pre, exp)) => format!("{pre}q^{{{exp}}}"),
            None => tok.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn qpoly_csv(p: &QPoly) -> String {
    let mut out = String::from("power,coefficient\n");
    for (k, c) in p.coeffs().iter().enumerate() {
        out.push_str(&format!("{k},{c}\n"));
    }
    out
}

/// `key,value` lines for flat summaries.
pub fn pairs_csv(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("field,value\n");
    for (k, v) in pairs {
        out.push_str(&format!("{k},{}\n", csv_quote(v)));
    }
    out
}

pub fn pairs_latex(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("\\begin{tabular}{ll}\n");
    for (k, v) in pairs {
        out.push_str(&format!("{} & {} \\\\\n", latex_escape(k), latex_escape(v)));
    }
    out.push_str("\\end{tabular}\n");
    out
}

pub fn latex_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '_' | '{' | '}' | '#' | '%' | '&' | '$' => {
                out.push('\\');
                out.push(ch);
            }
            _ => out.push(ch),
        }
    }
    out
}
