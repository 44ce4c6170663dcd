//! Parser for the `.alg` axiom language.
//!
//! ```text
//! file        = { line } ;
//! line        = [ decl | clauses ] [ "#" comment ] ;
//! decl        = "class" name [ "extends" name ]
//!             | "const" ident { ident }
//!             | "unary" "'"
//!             | "vars" ident { ident } ;
//! clauses     = clause { ";" clause } ;
//! clause      = conjunction "=>" disjunction | disjunction ;
//! conjunction = literal { "&" literal } ;
//! disjunction = literal { "|" literal } ;
//! literal     = term ( "=" | "!=" ) term | "(" literal ")" ;
//! term        = factor { [ binop ] factor } ;        (* left associative *)
//! factor      = atom { "'" } ;
//! atom        = ident | "(" term ")" ;
//! ident       = letter { digit } ;
//! binop       = "*" | "+" | "·" | "∘" ;
//! ```
//!
//! Juxtaposition is the binary operation, so `xy` reads as `x*y`. Identifiers
//! declared with `const` are constants; all others are variables unless a
//! `vars` line is present, in which case undeclared identifiers are rejected.

use std::collections::BTreeSet;

use super::ast::{AxiomSet, Clause, Literal, Term};
use super::library;
use super::AxiomError;

const BINARY_OPS: [char; 4] = ['*', '+', '·', '∘'];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Op(char),
    Prime,
    LParen,
    RParen,
    Eq,
    Neq,
    Implies,
    And,
    Or,
    Semi,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> AxiomError {
    AxiomError::Syntax { line, col, message: message.into() }
}

fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, AxiomError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, col });
        match c {
            _ if c.is_whitespace() => {
                i += 1;
            }
            _ if c.is_ascii_alphabetic() => {
                let mut name = c.to_string();
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    name.push(chars[i]);
                    i += 1;
                }
                push(&mut out, Tok::Ident(name));
            }
            '\'' | '′' => {
                push(&mut out, Tok::Prime);
                i += 1;
            }
            '(' => {
                push(&mut out, Tok::LParen);
                i += 1;
            }
            ')' => {
                push(&mut out, Tok::RParen);
                i += 1;
            }
            ';' => {
                push(&mut out, Tok::Semi);
                i += 1;
            }
            '&' => {
                push(&mut out, Tok::And);
                i += 1;
            }
            '|' => {
                push(&mut out, Tok::Or);
                i += 1;
            }
            '=' if chars.get(i + 1) == Some(&'>') => {
                push(&mut out, Tok::Implies);
                i += 2;
            }
            '=' => {
                push(&mut out, Tok::Eq);
                i += 1;
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                push(&mut out, Tok::Neq);
                i += 2;
            }
            '≠' => {
                push(&mut out, Tok::Neq);
                i += 1;
            }
            '⇒' => {
                push(&mut out, Tok::Implies);
                i += 1;
            }
            _ if BINARY_OPS.contains(&c) => {
                push(&mut out, Tok::Op(c));
                i += 1;
            }
            _ => return Err(syntax(line, col, format!("unexpected character {c:?}"))),
        }
    }
    Ok(out)
}

struct Scope<'a> {
    constants: &'a BTreeSet<String>,
    declared_vars: Option<&'a BTreeSet<String>>,
    operator: &'a mut Option<(char, usize, usize)>,
}

struct ClauseParser<'s, 'a> {
    toks: &'s [Token],
    pos: usize,
    line: usize,
    end_col: usize,
    scope: &'s mut Scope<'a>,
}

impl ClauseParser<'_, '_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => (self.line, self.end_col),
        }
    }

    fn error(&self, message: impl Into<String>) -> AxiomError {
        let (line, col) = self.here();
        syntax(line, col, message)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), AxiomError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn clause(&mut self) -> Result<Clause, AxiomError> {
        let first = self.literal()?;
        let mut literals = vec![first];
        match self.peek() {
            Some(Tok::And) | Some(Tok::Implies) => {
                while self.peek() == Some(&Tok::And) {
                    self.pos += 1;
                    literals.push(self.literal()?);
                }
                self.expect(Tok::Implies, "'=>' after conjunction")?;
                let mut out: Vec<Literal> = literals.iter().map(Literal::negated).collect();
                out.push(self.literal()?);
                while self.peek() == Some(&Tok::Or) {
                    self.pos += 1;
                    out.push(self.literal()?);
                }
                literals = out;
            }
            _ => {
                while self.peek() == Some(&Tok::Or) {
                    self.pos += 1;
                    literals.push(self.literal()?);
                }
            }
        }
        match self.peek() {
            None | Some(Tok::Semi) => Ok(Clause::new(literals)),
            Some(Tok::Implies) => Err(self.error("only one '=>' is allowed per clause")),
            Some(_) => Err(self.error("unexpected token after clause")),
        }
    }

    fn literal(&mut self) -> Result<Literal, AxiomError> {
        if self.peek() == Some(&Tok::LParen) {
            let saved = self.pos;
            self.pos += 1;
            if let Ok(lit) = self.literal() {
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    let continues = matches!(
                        self.peek(),
                        Some(Tok::Ident(_) | Tok::LParen | Tok::Op(_) | Tok::Prime | Tok::Eq | Tok::Neq)
                    );
                    if !continues {
                        return Ok(lit);
                    }
                }
            }
            self.pos = saved;
        }
        let lhs = self.term()?;
        let positive = match self.peek() {
            Some(Tok::Eq) => true,
            Some(Tok::Neq) => false,
            _ => return Err(self.error("expected '=' or '!='")),
        };
        self.pos += 1;
        let rhs = self.term()?;
        Ok(if positive { Literal::eq(lhs, rhs) } else { Literal::neq(lhs, rhs) })
    }

    fn term(&mut self) -> Result<Term, AxiomError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op(op)) => {
                    let op = *op;
                    let (line, col) = self.here();
                    match *self.scope.operator {
                        None => *self.scope.operator = Some((op, line, col)),
                        Some((first, ..)) if first != op => {
                            return Err(AxiomError::MultipleBinaryOps { first, second: op, line, col })
                        }
                        Some(_) => {}
                    }
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = Term::apply(acc, rhs);
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let rhs = self.factor()?;
                    acc = Term::apply(acc, rhs);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Term, AxiomError> {
        let mut t = self.atom()?;
        while self.peek() == Some(&Tok::Prime) {
            self.pos += 1;
            t = Term::unary(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, AxiomError> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.scope.constants.contains(&name) {
                    Ok(Term::Const(name))
                } else {
                    if let Some(vars) = self.scope.declared_vars {
                        if !vars.contains(&name) {
                            return Err(AxiomError::UnboundVariable { name, line, col });
                        }
                    }
                    Ok(Term::Var(name))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

struct Header {
    name: Option<String>,
    base: Option<(String, usize)>,
    constants: Vec<String>,
    unary: bool,
    vars: Option<BTreeSet<String>>,
}

fn keyword<'l>(line: &'l str, kw: &str) -> Option<&'l str> {
    let rest = line.strip_prefix(kw)?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest.trim())
    } else {
        None
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_digit())
}

/// Parses a theory, either a full `.alg` file or a bare clause body.
pub fn parse_axioms(text: &str) -> Result<AxiomSet, AxiomError> {
    parse_with_depth(text, 0)
}

pub(crate) fn parse_with_depth(text: &str, depth: usize) -> Result<AxiomSet, AxiomError> {
    if depth > 16 {
        return Err(AxiomError::Syntax { line: 1, col: 1, message: "extends chain too deep".into() });
    }
    let mut header = Header { name: None, base: None, constants: Vec::new(), unary: false, vars: None };
    let mut body: Vec<(usize, usize, &str)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim_start();
        let col0 = content.len() - trimmed.len() + 1;
        let trimmed = trimmed.trim_end();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = keyword(trimmed, "class") {
            if header.name.is_some() {
                return Err(syntax(lineno, col0, "duplicate class declaration"));
            }
            let words: Vec<&str> = rest.split_whitespace().collect();
            match words.as_slice() {
                [name] => header.name = Some(name.to_string()),
                [name, "extends", base] => {
                    header.name = Some(name.to_string());
                    header.base = Some((base.to_string(), lineno));
                }
                _ => return Err(syntax(lineno, col0, "expected 'class <name> [extends <name>]'")),
            }
        } else if let Some(rest) = keyword(trimmed, "const") {
            for word in rest.split_whitespace() {
                if !is_ident(word) {
                    return Err(syntax(lineno, col0, format!("invalid constant name {word:?}")));
                }
                if header.constants.iter().any(|c| c == word) {
                    return Err(syntax(lineno, col0, format!("constant {word} declared twice")));
                }
                header.constants.push(word.to_string());
            }
        } else if let Some(rest) = keyword(trimmed, "unary") {
            if rest != "'" {
                return Err(syntax(lineno, col0, "only the postfix unary operation ' is supported"));
            }
            header.unary = true;
        } else if let Some(rest) = keyword(trimmed, "vars") {
            let set = header.vars.get_or_insert_with(BTreeSet::new);
            for word in rest.split_whitespace() {
                if !is_ident(word) {
                    return Err(syntax(lineno, col0, format!("invalid variable name {word:?}")));
                }
                set.insert(word.to_string());
            }
        } else {
            body.push((lineno, col0, trimmed));
        }
    }

    let mut clauses = Vec::new();
    let mut constants: Vec<String> = Vec::new();
    let mut unary = header.unary;
    if let Some((base, _line)) = &header.base {
        let source = library::class_source(base).ok_or_else(|| AxiomError::UnknownBaseClass(base.clone()))?;
        let base_set = parse_with_depth(source, depth + 1)?;
        clauses.extend(base_set.clauses);
        constants.extend(base_set.named_constants);
        unary |= base_set.uses_unary;
    }
    for c in header.constants {
        if !constants.contains(&c) {
            constants.push(c);
        }
    }
    if let Some(vars) = &header.vars {
        if let Some(c) = vars.iter().find(|v| constants.contains(v)) {
            return Err(AxiomError::Syntax { line: 1, col: 1, message: format!("{c} declared both as constant and variable") });
        }
    }

    let const_set: BTreeSet<String> = constants.iter().cloned().collect();
    let mut operator = None;
    let mut scope = Scope { constants: &const_set, declared_vars: header.vars.as_ref(), operator: &mut operator };
    for (lineno, col0, line) in body {
        let toks = lex(line, lineno, col0)?;
        let end_col = col0 + line.chars().count();
        for chunk in toks.split(|t| t.tok == Tok::Semi) {
            if chunk.is_empty() {
                continue;
            }
            let mut parser = ClauseParser { toks: chunk, pos: 0, line: lineno, end_col, scope: &mut scope };
            clauses.push(parser.clause()?);
        }
    }

    let name = header.name.unwrap_or_else(|| "unnamed".to_string());
    Ok(AxiomSet::new(&name, clauses, constants, unary))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axiom::ast::Polarity;

    #[test]
    fn associativity_body() {
        let ax = parse_axioms("x*(y*z) = (x*y)*z").unwrap();
        assert_eq!(ax.clauses.len(), 1);
        assert_eq!(ax.clauses[0].variables, vec!["x", "y", "z"]);
        assert!(!ax.uses_unary);
    }

    #[test]
    fn cancellation_clauses() {
        let ax = parse_axioms("x*y = x*z => y = z ; y*x = z*x => y = z").unwrap();
        assert_eq!(ax.clauses.len(), 2);
        for clause in &ax.clauses {
            let pols: Vec<_> = clause.literals.iter().map(|l| l.polarity).collect();
            assert_eq!(pols, vec![Polarity::Negative, Polarity::Positive]);
        }
    }

    #[test]
    fn empty_body() {
        let ax = parse_axioms("").unwrap();
        assert!(ax.clauses.is_empty());
    }

    #[test]
    fn juxtaposition_and_primes() {
        let ax = parse_axioms("unary '\nx = xx'x\nx'' = x").unwrap();
        let x = Term::var("x");
        let xp = Term::unary(x.clone());
        assert_eq!(ax.clauses[0].literals[0].rhs, Term::apply(Term::apply(x.clone(), xp), x.clone()));
        assert_eq!(ax.clauses[1].literals[0].lhs, Term::unary(Term::unary(x)));
        assert!(ax.uses_unary);
    }

    #[test]
    fn parenthesized_literals() {
        let ax = parse_axioms("(w x = y z) => (w x = w z)").unwrap();
        let clause = &ax.clauses[0];
        assert_eq!(clause.literals.len(), 2);
        assert!(!clause.literals[0].is_positive());
        assert_eq!(clause.variables, vec!["w", "x", "y", "z"]);
    }

    #[test]
    fn parenthesized_term_is_not_a_literal() {
        let ax = parse_axioms("(x y) z = x (y z)").unwrap();
        assert_eq!(ax.clauses.len(), 1);
        assert!(ax.clauses[0].literals[0].lhs.children().len() == 2);
    }

    #[test]
    fn constants_declared() {
        let ax = parse_axioms("const e\nx e = x\ne x = x").unwrap();
        assert_eq!(ax.named_constants, vec!["e"]);
        assert!(ax.uses_identity);
        assert_eq!(ax.clauses[0].variables, vec!["x"]);
    }

    #[test]
    fn syntax_error_position() {
        let err = parse_axioms("x*y = y*x\nx*(y = z").unwrap_err();
        match err {
            AxiomError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        let err = parse_axioms("x ? y = x").unwrap_err();
        assert!(matches!(err, AxiomError::Syntax { line: 1, col: 3, .. }), "{err:?}");
    }

    #[test]
    fn unknown_base() {
        let err = parse_axioms("class foo extends nonsense\nx = x").unwrap_err();
        assert!(matches!(err, AxiomError::UnknownBaseClass(ref b) if b == "nonsense"));
    }

    #[test]
    fn two_binary_symbols() {
        let err = parse_axioms("x*y = x+y").unwrap_err();
        assert!(matches!(err, AxiomError::MultipleBinaryOps { first: '*', second: '+', .. }));
    }

    #[test]
    fn unbound_variable() {
        let err = parse_axioms("vars x y\nx*y = z").unwrap_err();
        assert!(matches!(err, AxiomError::UnboundVariable { ref name, .. } if name == "z"));
    }

    #[test]
    fn multiple_implications_rejected() {
        assert!(parse_axioms("x = y => y = x => x = x").is_err());
    }

    #[test]
    fn conjunctive_antecedent() {
        let ax = parse_axioms("x = y & y = z => x = z").unwrap();
        let pols: Vec<_> = ax.clauses[0].literals.iter().map(|l| l.is_positive()).collect();
        assert_eq!(pols, vec![false, false, true]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let ax = parse_axioms("# header\n\nclass c1 # trailing\nx y = y x # comm\n").unwrap();
        assert_eq!(ax.name, "c1");
        assert_eq!(ax.clauses.len(), 1);
    }
}
