//! DIMACS CNF with model-counting-competition projection lines.

use std::io::{self, Write};

use super::instance::{CnfInstance, Lit, Var};
use super::CnfError;

/// Writes the instance. With `with_projection`, a `c t pmc` marker precedes
/// the header and one `c p show ... 0` line lists the projection set.
pub fn write_dimacs<W: Write>(cnf: &CnfInstance, with_projection: bool, out: &mut W) -> io::Result<()> {
    let mut w = io::BufWriter::new(out);
    if with_projection {
        writeln!(w, "c t pmc")?;
    }
    writeln!(w, "p cnf {} {}", cnf.num_vars(), cnf.num_clauses())?;
    if with_projection {
        w.write_all(b"c p show")?;
        for v in cnf.projection().into_iter().flatten() {
            write!(w, " {}", v.id())?;
        }
        w.write_all(b" 0\n")?;
    }
    let mut buf = itoa_buf();
    for clause in cnf.clauses() {
        for lit in clause {
            w.write_all(fmt_int(&mut buf, lit.to_dimacs()))?;
            w.write_all(b" ")?;
        }
        w.write_all(b"0\n")?;
    }
    w.flush()
}

pub fn emit_dimacs(cnf: &CnfInstance, with_projection: bool) -> Vec<u8> {
    let mut out = Vec::new();
    write_dimacs(cnf, with_projection, &mut out).expect("writing to a Vec cannot fail");
    out
}

/// The sidecar projection file: one variable id per line.
pub fn emit_projection_sidecar(cnf: &CnfInstance) -> String {
    let mut out = String::new();
    for v in cnf.projection().into_iter().flatten() {
        out.push_str(&v.id().to_string());
        out.push('\n');
    }
    out
}

fn itoa_buf() -> [u8; 12] {
    [0; 12]
}

fn fmt_int(buf: &mut [u8; 12], value: i32) -> &[u8] {
    let mut v = value.unsigned_abs();
    let mut i = buf.len();
    loop {
        i -= 1;
        buf[i] = b'0' + (v % 10) as u8;
        v /= 10;
        if v == 0 {
            break;
        }
    }
    if value < 0 {
        i -= 1;
        buf[i] = b'-';
    }
    &buf[i..]
}

/// Parses DIMACS text, including `c p show` projection lines.
pub fn parse_dimacs(text: &str) -> Result<CnfInstance, CnfError> {
    let mut cnf = CnfInstance::new();
    let mut header: Option<(u32, usize)> = None;
    let mut pending: Vec<Lit> = Vec::new();
    let perr = |line: usize, msg: &str| CnfError::Dimacs { line, message: msg.to_string() };
    let mut projection: Option<Vec<Var>> = None;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            let words: Vec<&str> = rest.split_whitespace().collect();
            if words.len() >= 2 && words[0] == "p" && words[1] == "show" {
                let set = projection.get_or_insert_with(Vec::new);
                for w in &words[2..] {
                    let id: u32 = w.parse().map_err(|_| perr(lineno, "bad projection id"))?;
                    if id == 0 {
                        break;
                    }
                    set.push(Var::from_id(id));
                }
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('p') {
            if header.is_some() {
                return Err(perr(lineno, "duplicate header"));
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            match words.as_slice() {
                ["cnf", v, c] => {
                    let v: u32 = v.parse().map_err(|_| perr(lineno, "bad variable count"))?;
                    let c: usize = c.parse().map_err(|_| perr(lineno, "bad clause count"))?;
                    cnf.reserve_vars(v);
                    header = Some((v, c));
                }
                _ => return Err(perr(lineno, "expected 'p cnf <vars> <clauses>'")),
            }
            continue;
        }
        let Some((vars, _)) = header else {
            return Err(perr(lineno, "clause before header"));
        };
        for word in trimmed.split_whitespace() {
            let value: i32 = word.parse().map_err(|_| perr(lineno, "bad literal"))?;
            if value == 0 {
                if pending.is_empty() {
                    cnf.add_unsat_marker();
                } else {
                    cnf.add_clause(&pending);
                    pending.clear();
                }
            } else {
                if value.unsigned_abs() > vars {
                    return Err(perr(lineno, "literal exceeds declared variable count"));
                }
                pending.push(Lit::from_dimacs(value));
            }
        }
    }
    let Some((vars, clauses)) = header else {
        return Err(perr(0, "missing header"));
    };
    if !pending.is_empty() {
        return Err(perr(0, "unterminated clause"));
    }
    if cnf.num_clauses() != clauses {
        return Err(perr(0, &format!("header declares {clauses} clauses, found {}", cnf.num_clauses())));
    }
    if let Some(p) = projection {
        if p.iter().any(|v| v.id() > vars) {
            return Err(perr(0, "projection id exceeds declared variable count"));
        }
        cnf.add_projection(p);
    }
    Ok(cnf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_instance() {
        assert_eq!(emit_dimacs(&CnfInstance::new(), false), b"p cnf 0 0\n");
    }

    #[test]
    fn single_unit() {
        let mut cnf = CnfInstance::new();
        let v = cnf.new_var("x", &[0]).unwrap();
        cnf.add_unit(v.positive());
        assert_eq!(emit_dimacs(&cnf, false), b"p cnf 1 1\n1 0\n");
    }

    #[test]
    fn projection_line() {
        let mut cnf = CnfInstance::new();
        let a = cnf.new_var("x", &[0]).unwrap();
        let b = cnf.new_var("x", &[1]).unwrap();
        let c = cnf.new_var("x", &[2]).unwrap();
        cnf.add_clause(&[a.positive(), c.negative()]);
        cnf.add_projection([b, a]);
        let text = String::from_utf8(emit_dimacs(&cnf, true)).unwrap();
        assert!(text.lines().any(|l| l == "c p show 1 2 0"), "{text}");
        assert_eq!(emit_projection_sidecar(&cnf), "1\n2\n");
    }

    #[test]
    fn parse_errors() {
        assert!(parse_dimacs("1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 1 1\n1\n").is_err());
    }

    #[test]
    fn multi_line_clauses() {
        let cnf = parse_dimacs("c hello\np cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
        assert_eq!(cnf.num_clauses(), 2);
        assert_eq!(cnf.clause(0).len(), 3);
    }

    fn cnf_strategy() -> impl Strategy<Value = (u32, Vec<Vec<i32>>, Option<Vec<u32>>)> {
        (1u32..12).prop_flat_map(|vars| {
            let lit = (1..=vars as i32, any::<bool>()).prop_map(|(v, s)| if s { v } else { -v });
            (
                Just(vars),
                prop::collection::vec(prop::collection::vec(lit, 1..5), 0..10),
                prop::option::of(prop::collection::vec(1..=vars, 0..5)),
            )
        })
    }

    proptest! {
        #[test]
        fn emit_parse_emit_is_identical((vars, clauses, proj) in cnf_strategy()) {
            let mut cnf = CnfInstance::new();
            for i in 0..vars {
                cnf.new_var("v", &[i as usize]).unwrap();
            }
            for c in &clauses {
                let lits: Vec<Lit> = c.iter().map(|&l| Lit::from_dimacs(l)).collect();
                cnf.add_clause(&lits);
            }
            let with_projection = proj.is_some();
            if let Some(p) = proj {
                cnf.add_projection(p.into_iter().map(Var::from_id));
            }
            let first = emit_dimacs(&cnf, with_projection);
            let reparsed = parse_dimacs(std::str::from_utf8(&first).unwrap()).unwrap();
            prop_assert_eq!(reparsed.projection().is_some(), with_projection);
            let second = emit_dimacs(&reparsed, with_projection);
            prop_assert_eq!(first, second);
        }
    }
}
