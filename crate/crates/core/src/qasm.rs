//! OpenQASM 2.0 subset front-end.
//!
//! Accepted input: the `OPENQASM 2.0;` header, `include` of a standard header
//! (ignored), `qreg`/`creg` declarations, the supported gate set (`h x y z s
//! sdg t tdg rx ry rz cx cz swap rzz`), `measure`, `reset`, `barrier`, and
//! `//` line comments. Angle expressions are numeric literals, `pi`, and
//! pi-scaled rational forms such as `pi/2` or `3*pi/4`.
//!
//! Emission is canonical: one statement per line, element-form measurements,
//! and angles printed as decimal literals with 12 significant digits.

use crate::circuit::{Circuit, CircuitError, Gate, Instruction, OpKind};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QasmError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: undeclared register reference '{name}'{}", fmt_index(.index))]
    Undeclared {
        line: usize,
        name: String,
        index: Option<usize>,
    },
    #[error("line {line}: unsupported gate '{name}'")]
    UnsupportedGate { line: usize, name: String },
    #[error("line {line}: '{what}' expects {expected} {kind}, got {got}")]
    ArityMismatch {
        line: usize,
        what: String,
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: malformed angle expression: {msg}")]
    MalformedAngle { line: usize, msg: String },
}

fn fmt_index(index: &Option<usize>) -> String {
    match index {
        Some(i) => format!(" at index {i}"),
        None => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number { value: f64, is_int: bool },
    Str(String),
    Semi,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Star,
    Slash,
    Plus,
    Minus,
    Eof,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = *self.src.get(self.pos)?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn err(&self, msg: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn next_token(&mut self) -> Result<Spanned, QasmError> {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'/') if self.peek2() == Some(b'/') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, col) = (self.line, self.col);
        let spanned = |tok| Spanned { tok, line, col };
        let Some(b) = self.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        match b {
            b';' => {
                self.bump();
                Ok(spanned(Tok::Semi))
            }
            b',' => {
                self.bump();
                Ok(spanned(Tok::Comma))
            }
            b'(' => {
                self.bump();
                Ok(spanned(Tok::LParen))
            }
            b')' => {
                self.bump();
                Ok(spanned(Tok::RParen))
            }
            b'[' => {
                self.bump();
                Ok(spanned(Tok::LBracket))
            }
            b']' => {
                self.bump();
                Ok(spanned(Tok::RBracket))
            }
            b'*' => {
                self.bump();
                Ok(spanned(Tok::Star))
            }
            b'/' => {
                self.bump();
                Ok(spanned(Tok::Slash))
            }
            b'+' => {
                self.bump();
                Ok(spanned(Tok::Plus))
            }
            b'-' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Ok(spanned(Tok::Arrow))
                } else {
                    Ok(spanned(Tok::Minus))
                }
            }
            b'"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        Some(b'"') => break,
                        Some(c) => s.push(c as char),
                        None => return Err(self.err("unterminated string literal")),
                    }
                }
                Ok(spanned(Tok::Str(s)))
            }
            b if b.is_ascii_digit() || b == b'.' => {
                let start = self.pos;
                let mut is_int = true;
                while let Some(c) = self.peek() {
                    if c.is_ascii_digit() {
                        self.bump();
                    } else if c == b'.' && is_int {
                        is_int = false;
                        self.bump();
                    } else {
                        break;
                    }
                }
                if matches!(self.peek(), Some(b'e') | Some(b'E')) {
                    is_int = false;
                    self.bump();
                    if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                        self.bump();
                    }
                    if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        return Err(self.err("missing exponent digits"));
                    }
                    while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                        self.bump();
                    }
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let value: f64 = text
                    .parse()
                    .map_err(|_| self.err(format!("invalid numeric literal '{text}'")))?;
                Ok(spanned(Tok::Number { value, is_int }))
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.bump();
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(spanned(Tok::Ident(text.to_string())))
            }
            other => Err(self.err(format!("unexpected character '{}'", other as char))),
        }
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    circuit: Circuit,
}

/// Gate table entry: constructor, qubit arity, parameter count.
fn gate_entry(name: &str) -> Option<(fn(&[f64]) -> Gate, usize, usize)> {
    let e: (fn(&[f64]) -> Gate, usize, usize) = match name {
        "h" => (|_| Gate::H, 1, 0),
        "x" => (|_| Gate::X, 1, 0),
        "y" => (|_| Gate::Y, 1, 0),
        "z" => (|_| Gate::Z, 1, 0),
        "s" => (|_| Gate::S, 1, 0),
        "sdg" => (|_| Gate::Sdg, 1, 0),
        "t" => (|_| Gate::T, 1, 0),
        "tdg" => (|_| Gate::Tdg, 1, 0),
        "rx" => (|p| Gate::Rx(p[0]), 1, 1),
        "ry" => (|p| Gate::Ry(p[0]), 1, 1),
        "rz" => (|p| Gate::Rz(p[0]), 1, 1),
        "cx" => (|_| Gate::Cx, 2, 0),
        "cz" => (|_| Gate::Cz, 2, 0),
        "swap" => (|_| Gate::Swap, 2, 0),
        "rzz" => (|p| Gate::Rzz(p[0]), 2, 1),
        _ => return None,
    };
    Some(e)
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn next(&mut self) -> Spanned {
        let t = self.tokens[self.pos.min(self.tokens.len() - 1)].clone();
        self.pos = (self.pos + 1).min(self.tokens.len());
        t
    }

    fn syntax(&self, at: &Spanned, msg: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: at.line,
            col: at.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<Spanned, QasmError> {
        let t = self.next();
        if std::mem::discriminant(&t.tok) == std::mem::discriminant(want) {
            Ok(t)
        } else {
            Err(self.syntax(&t, format!("expected {what}")))
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<(String, Spanned), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.syntax(&t, format!("expected {what}"))),
        }
    }

    fn expect_uint(&mut self, what: &str) -> Result<usize, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Number { value, is_int: true } if value >= 0.0 => Ok(value as usize),
            _ => Err(self.syntax(&t, format!("expected {what}"))),
        }
    }

    fn header(&mut self) -> Result<(), QasmError> {
        let (kw, at) = self.expect_ident("'OPENQASM' header")?;
        if kw != "OPENQASM" {
            return Err(self.syntax(&at, "expected 'OPENQASM' header"));
        }
        let t = self.next();
        match t.tok {
            Tok::Number { value, .. } if value == 2.0 => {}
            _ => return Err(self.syntax(&t, "only OpenQASM version 2.0 is supported")),
        }
        self.expect(&Tok::Semi, "';' after version")?;
        Ok(())
    }

    /// `name` or `name[i]`; returns the element index when present.
    fn reg_arg(&mut self) -> Result<(String, Option<usize>, Spanned), QasmError> {
        let (name, at) = self.expect_ident("register reference")?;
        if self.peek().tok == Tok::LBracket {
            self.next();
            let idx = self.expect_uint("register element index")?;
            self.expect(&Tok::RBracket, "']' after index")?;
            Ok((name, Some(idx), at))
        } else {
            Ok((name, None, at))
        }
    }

    fn qubit_at(&self, name: &str, idx: usize, at: &Spanned) -> Result<usize, QasmError> {
        self.circuit
            .find_qubit(name, idx)
            .map(|q| q.0)
            .ok_or(QasmError::Undeclared {
                line: at.line,
                name: name.to_string(),
                index: Some(idx),
            })
    }

    fn cbit_at(&self, name: &str, idx: usize, at: &Spanned) -> Result<usize, QasmError> {
        self.circuit
            .find_cbit(name, idx)
            .map(|c| c.0)
            .ok_or(QasmError::Undeclared {
                line: at.line,
                name: name.to_string(),
                index: Some(idx),
            })
    }

    fn qreg_size(&self, name: &str, at: &Spanned) -> Result<usize, QasmError> {
        self.circuit
            .qregs()
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.size)
            .ok_or(QasmError::Undeclared {
                line: at.line,
                name: name.to_string(),
                index: None,
            })
    }

    fn creg_size(&self, name: &str, at: &Spanned) -> Result<usize, QasmError> {
        self.circuit
            .cregs()
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.size)
            .ok_or(QasmError::Undeclared {
                line: at.line,
                name: name.to_string(),
                index: None,
            })
    }

    /// Angle grammar: `['-'|'+'] atom (('*'|'/') atom)*` with `atom` a number
    /// or `pi`. Anything else is a malformed angle.
    fn angle_expr(&mut self) -> Result<f64, QasmError> {
        let line = self.peek().line;
        let mut sign = 1.0;
        loop {
            match self.peek().tok {
                Tok::Minus => {
                    sign = -sign;
                    self.next();
                }
                Tok::Plus => {
                    self.next();
                }
                _ => break,
            }
        }
        let mut value = sign * self.angle_atom(line)?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    value *= self.angle_atom(line)?;
                }
                Tok::Slash => {
                    self.next();
                    value /= self.angle_atom(line)?;
                }
                _ => break,
            }
        }
        if !value.is_finite() {
            return Err(QasmError::MalformedAngle {
                line,
                msg: "expression does not evaluate to a finite number".to_string(),
            });
        }
        Ok(value)
    }

    fn angle_atom(&mut self, line: usize) -> Result<f64, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number { value, .. } => Ok(*value),
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(s) => Err(QasmError::MalformedAngle {
                line,
                msg: format!("unknown symbol '{s}'"),
            }),
            other => Err(QasmError::MalformedAngle {
                line,
                msg: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn push_mapped(&mut self, ins: Instruction, at: &Spanned) -> Result<(), QasmError> {
        self.circuit
            .push(ins)
            .map_err(|e| self.map_circuit_err(e, at))
    }

    fn map_circuit_err(&self, e: CircuitError, at: &Spanned) -> QasmError {
        QasmError::Syntax {
            line: at.line,
            col: at.col,
            msg: e.to_string(),
        }
    }

    fn statement(&mut self) -> Result<bool, QasmError> {
        let t = self.next();
        let name = match &t.tok {
            Tok::Eof => return Ok(false),
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.syntax(&t, "expected a statement")),
        };
        match name.as_str() {
            "include" => {
                self.expect(&Tok::Str(String::new()), "include path string")?;
                self.expect(&Tok::Semi, "';' after include")?;
            }
            "qreg" | "creg" => {
                let (reg, at) = self.expect_ident("register name")?;
                self.expect(&Tok::LBracket, "'[' in register declaration")?;
                let size = self.expect_uint("register size")?;
                self.expect(&Tok::RBracket, "']' in register declaration")?;
                self.expect(&Tok::Semi, "';' after declaration")?;
                let r = if name == "qreg" {
                    self.circuit.add_qreg(&reg, size)
                } else {
                    self.circuit.add_creg(&reg, size)
                };
                r.map_err(|e| self.map_circuit_err(e, &at))?;
            }
            "measure" => {
                let (qname, qidx, qat) = self.reg_arg()?;
                self.expect(&Tok::Arrow, "'->' in measurement")?;
                let (cname, cidx, cat) = self.reg_arg()?;
                self.expect(&Tok::Semi, "';' after measurement")?;
                match (qidx, cidx) {
                    (Some(qi), Some(ci)) => {
                        let q = self.qubit_at(&qname, qi, &qat)?;
                        let c = self.cbit_at(&cname, ci, &cat)?;
                        let ins = Instruction {
                            kind: OpKind::Measure,
                            qubits: vec![crate::circuit::Qubit(q)],
                            cbit: Some(crate::circuit::Cbit(c)),
                        };
                        self.push_mapped(ins, &qat)?;
                    }
                    (None, None) => {
                        // register-to-register broadcast
                        let qsize = self.qreg_size(&qname, &qat)?;
                        let csize = self.creg_size(&cname, &cat)?;
                        if qsize != csize {
                            return Err(QasmError::ArityMismatch {
                                line: qat.line,
                                what: "measure".to_string(),
                                kind: "matching register sizes",
                                expected: qsize,
                                got: csize,
                            });
                        }
                        for i in 0..qsize {
                            let q = self.qubit_at(&qname, i, &qat)?;
                            let c = self.cbit_at(&cname, i, &cat)?;
                            let ins = Instruction {
                                kind: OpKind::Measure,
                                qubits: vec![crate::circuit::Qubit(q)],
                                cbit: Some(crate::circuit::Cbit(c)),
                            };
                            self.push_mapped(ins, &qat)?;
                        }
                    }
                    _ => {
                        return Err(
                            self.syntax(&qat, "measure operands must both be indexed or both registers")
                        )
                    }
                }
            }
            "reset" => {
                let (qname, qidx, qat) = self.reg_arg()?;
                self.expect(&Tok::Semi, "';' after reset")?;
                let Some(qi) = qidx else {
                    return Err(self.syntax(&qat, "reset operand must be indexed"));
                };
                let q = self.qubit_at(&qname, qi, &qat)?;
                let ins = Instruction {
                    kind: OpKind::Reset,
                    qubits: vec![crate::circuit::Qubit(q)],
                    cbit: None,
                };
                self.push_mapped(ins, &qat)?;
            }
            "barrier" => {
                let mut qubits: Vec<usize> = Vec::new();
                if self.peek().tok == Tok::Semi {
                    // bare barrier applies to every declared qubit
                    let t = self.next();
                    if self.circuit.qubit_count() == 0 {
                        return Err(self.syntax(&t, "barrier requires at least one declared qubit"));
                    }
                    qubits.extend(0..self.circuit.qubit_count());
                    let ins = Instruction {
                        kind: OpKind::Barrier,
                        qubits: qubits.into_iter().map(crate::circuit::Qubit).collect(),
                        cbit: None,
                    };
                    self.push_mapped(ins, &t)?;
                    return Ok(true);
                }
                let first_at;
                {
                    let (qname, qidx, qat) = self.reg_arg()?;
                    first_at = qat.clone();
                    match qidx {
                        Some(qi) => qubits.push(self.qubit_at(&qname, qi, &qat)?),
                        None => {
                            let size = self.qreg_size(&qname, &qat)?;
                            for i in 0..size {
                                qubits.push(self.qubit_at(&qname, i, &qat)?);
                            }
                        }
                    }
                }
                while self.peek().tok == Tok::Comma {
                    self.next();
                    let (qname, qidx, qat) = self.reg_arg()?;
                    match qidx {
                        Some(qi) => qubits.push(self.qubit_at(&qname, qi, &qat)?),
                        None => {
                            let size = self.qreg_size(&qname, &qat)?;
                            for i in 0..size {
                                qubits.push(self.qubit_at(&qname, i, &qat)?);
                            }
                        }
                    }
                }
                self.expect(&Tok::Semi, "';' after barrier")?;
                let ins = Instruction {
                    kind: OpKind::Barrier,
                    qubits: qubits.into_iter().map(crate::circuit::Qubit).collect(),
                    cbit: None,
                };
                self.push_mapped(ins, &first_at)?;
            }
            gate_name => {
                let Some((ctor, arity, n_params)) = gate_entry(gate_name) else {
                    return Err(QasmError::UnsupportedGate {
                        line: t.line,
                        name: gate_name.to_string(),
                    });
                };
                let mut params: Vec<f64> = Vec::new();
                if self.peek().tok == Tok::LParen {
                    self.next();
                    if self.peek().tok != Tok::RParen {
                        params.push(self.angle_expr()?);
                        while self.peek().tok == Tok::Comma {
                            self.next();
                            params.push(self.angle_expr()?);
                        }
                    }
                    self.expect(&Tok::RParen, "')' after gate parameters")?;
                }
                if params.len() != n_params {
                    return Err(QasmError::ArityMismatch {
                        line: t.line,
                        what: gate_name.to_string(),
                        kind: "parameter(s)",
                        expected: n_params,
                        got: params.len(),
                    });
                }
                let mut qubits: Vec<usize> = Vec::new();
                loop {
                    let (qname, qidx, qat) = self.reg_arg()?;
                    let Some(qi) = qidx else {
                        return Err(self.syntax(&qat, "gate operands must be indexed"));
                    };
                    qubits.push(self.qubit_at(&qname, qi, &qat)?);
                    if self.peek().tok == Tok::Comma {
                        self.next();
                    } else {
                        break;
                    }
                }
                self.expect(&Tok::Semi, "';' after gate")?;
                if qubits.len() != arity {
                    return Err(QasmError::ArityMismatch {
                        line: t.line,
                        what: gate_name.to_string(),
                        kind: "qubit argument(s)",
                        expected: arity,
                        got: qubits.len(),
                    });
                }
                let ins = Instruction {
                    kind: OpKind::Gate(ctor(&params)),
                    qubits: qubits.into_iter().map(crate::circuit::Qubit).collect(),
                    cbit: None,
                };
                self.push_mapped(ins, &t)?;
            }
        }
        Ok(true)
    }
}

/// Parses an OpenQASM 2.0 subset document into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut lexer = Lexer::new(text);
    let mut tokens = Vec::new();
    loop {
        let t = lexer.next_token()?;
        let done = t.tok == Tok::Eof;
        tokens.push(t);
        if done {
            break;
        }
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        circuit: Circuit::new(),
    };
    p.header()?;
    while p.statement()? {}
    Ok(p.circuit)
}

/// Prints an angle with 12 significant digits, in exponent form.
fn fmt_angle(theta: f64) -> String {
    format!("{theta:.11e}")
}

/// Emits a circuit as a canonical OpenQASM 2.0 document. The output parses
/// back to a circuit equal to the input with angles matching to 12
/// significant digits.
pub fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\n");
    out.push_str("include \"qelib1.inc\";\n");
    for r in circuit.qregs() {
        let _ = writeln!(out, "qreg {}[{}];", r.name, r.size);
    }
    for r in circuit.cregs() {
        let _ = writeln!(out, "creg {}[{}];", r.name, r.size);
    }
    let qname = |q: crate::circuit::Qubit| {
        let id = circuit.qubit_id(q).expect("qubit is declared");
        format!("{}[{}]", id.register, id.index)
    };
    for ins in circuit.instructions() {
        match &ins.kind {
            OpKind::Gate(g) => {
                let args: Vec<String> = ins.qubits.iter().map(|&q| qname(q)).collect();
                match g.param() {
                    Some(t) => {
                        let _ = writeln!(out, "{}({}) {};", g.name(), fmt_angle(t), args.join(","));
                    }
                    None => {
                        let _ = writeln!(out, "{} {};", g.name(), args.join(","));
                    }
                }
            }
            OpKind::Measure => {
                let c = ins.cbit.expect("measure carries classical target");
                let cid = circuit.cbit_id(c).expect("cbit is declared");
                let _ = writeln!(
                    out,
                    "measure {} -> {}[{}];",
                    qname(ins.qubits[0]),
                    cid.register,
                    cid.index
                );
            }
            OpKind::Reset => {
                let _ = writeln!(out, "reset {};", qname(ins.qubits[0]));
            }
            OpKind::Barrier => {
                let args: Vec<String> = ins.qubits.iter().map(|&q| qname(q)).collect();
                let _ = writeln!(out, "barrier {};", args.join(","));
            }
        }
    }
    out
}
