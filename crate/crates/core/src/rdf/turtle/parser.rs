use std::collections::BTreeMap;

use crate::rdf::term::{is_language_tag, BlankNode, Iri, Literal, Subject, Term, Triple};
use crate::rdf::{vocab, Graph};

use super::SyntaxError;

/// Parses a Turtle document restricted to the supported subset.
///
/// The whole document is rejected on the first error; no partial graph is
/// ever returned.
pub fn parse_turtle(text: &str) -> Result<Graph, SyntaxError> {
    Parser::new(text).document()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    prefixes: BTreeMap<String, Iri>,
    graph: Graph,
}

#[derive(Clone, Copy)]
struct Mark {
    line: usize,
    column: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            prefixes: BTreeMap::new(),
            graph: Graph::new(),
        }
    }

    fn mark(&self) -> Mark {
        Mark { line: self.line, column: self.column }
    }

    fn err_at(&self, at: Mark, message: impl Into<String>) -> SyntaxError {
        SyntaxError { line: at.line, column: at.column, message: message.into() }
    }

    fn err(&self, message: impl Into<String>) -> SyntaxError {
        self.err_at(self.mark(), message)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            Some(found) => Err(self.err(format!("expected '{c}', found '{found}'"))),
            None => Err(self.err(format!("expected '{c}', found end of input"))),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn document(mut self) -> Result<Graph, SyntaxError> {
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('@') => self.prefix_directive()?,
                Some(_) => self.triples()?,
            }
        }
        for (label, ns) in self.prefixes {
            self.graph.set_prefix(label, ns);
        }
        Ok(self.graph)
    }

    fn prefix_directive(&mut self) -> Result<(), SyntaxError> {
        let at = self.mark();
        if !self.starts_with("@prefix") {
            let word: String = self.chars[self.pos..].iter().take_while(|c| !c.is_whitespace()).collect();
            return Err(self.err_at(at, format!("unsupported directive '{word}'")));
        }
        for _ in 0.."@prefix".len() {
            self.bump();
        }
        if !self.peek().is_some_and(char::is_whitespace) {
            return Err(self.err("expected whitespace after @prefix"));
        }
        self.skip_ws();
        let label = self.prefix_label()?;
        self.expect(':')?;
        self.skip_ws();
        if self.peek() != Some('<') {
            return Err(self.err("expected namespace IRI in angle brackets"));
        }
        let ns = self.iri_ref()?;
        self.skip_ws();
        self.expect('.')?;
        self.prefixes.insert(label, ns);
        Ok(())
    }

    fn prefix_label(&mut self) -> Result<String, SyntaxError> {
        let at = self.mark();
        let mut label = String::new();
        if let Some(c) = self.peek() {
            if c.is_ascii_alphabetic() {
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' {
                        label.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
            }
        }
        if label.ends_with('.') {
            return Err(self.err_at(at, format!("prefix label '{label}' may not end with '.'")));
        }
        if self.peek() != Some(':') {
            return Err(self.err("expected prefix label followed by ':'"));
        }
        Ok(label)
    }

    fn triples(&mut self) -> Result<(), SyntaxError> {
        let subject = self.subject()?;
        self.skip_ws();
        self.predicate_object_list(&subject)?;
        self.skip_ws();
        match self.peek() {
            Some('.') => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.err(format!("expected '.' to end statement, found '{c}'"))),
            None => Err(self.err("unterminated statement: expected '.'")),
        }
    }

    fn subject(&mut self) -> Result<Subject, SyntaxError> {
        let at = self.mark();
        match self.peek() {
            Some('<') => Ok(Subject::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Subject::Blank(self.blank_node()?)),
            Some('[') => Err(self.err("anonymous blank nodes '[...]' are not supported")),
            Some('(') => Err(self.err("collections '(...)' are not supported")),
            Some(c) if c.is_alphabetic() || c == ':' => match self.name()? {
                Name::Prefixed(iri) => Ok(Subject::Iri(iri)),
                Name::Bare(word) => Err(self.err_at(at, format!("unexpected '{word}' in subject position"))),
            },
            Some('"') | Some('\'') => Err(self.err("a literal cannot be a subject")),
            Some(c) => Err(self.err(format!("unexpected '{c}' at start of statement"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Subject) -> Result<(), SyntaxError> {
        loop {
            let predicate = self.verb()?;
            self.skip_ws();
            loop {
                let object = self.object()?;
                self.graph.insert(Triple::new(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.peek() == Some(',') {
                    self.bump();
                    self.skip_ws();
                } else {
                    break;
                }
            }
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), Some('.') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, SyntaxError> {
        let at = self.mark();
        match self.peek() {
            Some('<') => self.iri_ref(),
            Some(c) if c.is_alphabetic() || c == ':' => match self.name()? {
                Name::Prefixed(iri) => Ok(iri),
                Name::Bare(word) if word == "a" => Ok(Iri::from_static(vocab::RDF_TYPE)),
                Name::Bare(word) => Err(self.err_at(at, format!("unexpected '{word}' in predicate position"))),
            },
            Some('.') | None => Err(self.err("expected predicate")),
            Some(c) => Err(self.err(format!("unexpected '{c}' in predicate position"))),
        }
    }

    fn object(&mut self) -> Result<Term, SyntaxError> {
        let at = self.mark();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_ref()?)),
            Some('_') if self.peek_at(1) == Some(':') => Ok(Term::Blank(self.blank_node()?)),
            Some('"') | Some('\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => self.number(),
            Some('[') => Err(self.err("anonymous blank nodes '[...]' are not supported")),
            Some('(') => Err(self.err("collections '(...)' are not supported")),
            Some(c) if c.is_alphabetic() || c == ':' => match self.name()? {
                Name::Prefixed(iri) => Ok(Term::Iri(iri)),
                Name::Bare(word) if word == "true" || word == "false" => {
                    Ok(Term::Literal(Literal::typed(word, Iri::from_static(vocab::XSD_BOOLEAN))))
                }
                Name::Bare(word) => Err(self.err_at(at, format!("unexpected '{word}' in object position"))),
            },
            Some(c) => Err(self.err(format!("expected object, found '{c}'"))),
            None => Err(self.err("expected object, found end of input")),
        }
    }

    fn iri_ref(&mut self) -> Result<Iri, SyntaxError> {
        let at = self.mark();
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() => return Err(self.err_at(at, "whitespace inside IRI")),
                Some('\\') => return Err(self.err_at(at, "escape sequences in IRIs are not supported")),
                Some(c) => value.push(c),
                None => return Err(self.err_at(at, "unterminated IRI")),
            }
        }
        Iri::new(value).map_err(|e| match e {
            crate::rdf::TermError::InvalidIri(v, "missing scheme") => {
                self.err_at(at, format!("relative IRI <{v}> is not supported"))
            }
            other => self.err_at(at, other.to_string()),
        })
    }

    fn blank_node(&mut self) -> Result<BlankNode, SyntaxError> {
        let at = self.mark();
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        BlankNode::new(label).map_err(|e| self.err_at(at, e.to_string()))
    }

    /// A prefixed name or a bare keyword.
    fn name(&mut self) -> Result<Name, SyntaxError> {
        let at = self.mark();
        let mut head = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' {
                if c == '.'
                    && !self.peek_at(1).is_some_and(|n| n.is_ascii_alphanumeric() || n == '_' || n == '-' || n == '.')
                {
                    break;
                }
                head.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek() != Some(':') {
            if head.is_empty() {
                let c = self.peek().map(String::from).unwrap_or_default();
                return Err(self.err_at(at, format!("unexpected '{c}'")));
            }
            return Ok(Name::Bare(head));
        }
        self.bump();
        if !head.is_empty() && !head.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(self.err_at(at, format!("invalid prefix label '{head}'")));
        }
        let mut local = String::new();
        if self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            while let Some(c) = self.peek() {
                let inner_dot = c == '.'
                    && self.peek_at(1).is_some_and(|n| n.is_alphanumeric() || n == '_' || n == '-' || n == '.');
                if !(c.is_alphanumeric() || c == '_' || c == '-' || inner_dot) {
                    break;
                }
                local.push(c);
                self.bump();
            }
        }
        if let Some(c) = self.peek() {
            if c == ':' || c == '%' || c == '\\' {
                return Err(self.err(format!("unsupported character '{c}' in prefixed name")));
            }
        }
        let Some(ns) = self.prefixes.get(&head) else {
            return Err(self.err_at(at, format!("undefined prefix '{head}:'")));
        };
        Iri::new(format!("{}{}", ns.as_str(), local)).map(Name::Prefixed).map_err(|e| self.err_at(at, e.to_string()))
    }

    fn literal(&mut self) -> Result<Term, SyntaxError> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                let at = self.mark();
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '-' {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if !is_language_tag(&tag) {
                    return Err(self.err_at(at, format!("invalid language tag '@{tag}'")));
                }
                Ok(Term::Literal(Literal::lang(lexical, tag).expect("tag checked")))
            }
            Some('^') => {
                self.bump();
                self.expect('^')?;
                let datatype = match self.peek() {
                    Some('<') => self.iri_ref()?,
                    Some(c) if c.is_alphabetic() || c == ':' => {
                        let at = self.mark();
                        match self.name()? {
                            Name::Prefixed(iri) => iri,
                            Name::Bare(word) => {
                                return Err(self.err_at(at, format!("expected datatype IRI, found '{word}'")))
                            }
                        }
                    }
                    _ => return Err(self.err("expected datatype IRI after '^^'")),
                };
                Ok(Term::Literal(Literal::typed(lexical, datatype)))
            }
            _ => Ok(Term::Literal(Literal::string(lexical))),
        }
    }

    fn string(&mut self) -> Result<String, SyntaxError> {
        let at = self.mark();
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut out = String::new();
        loop {
            let Some(c) = self.peek() else {
                return Err(self.err_at(at, "unterminated string literal"));
            };
            if c == quote {
                if !long {
                    self.bump();
                    return Ok(out);
                }
                if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                    // A long string may end with up to two extra quotes of its own.
                    if self.peek_at(3) != Some(quote) {
                        self.bump();
                        self.bump();
                        self.bump();
                        return Ok(out);
                    }
                }
                out.push(c);
                self.bump();
                continue;
            }
            if c == '\\' {
                out.push(self.escape()?);
                continue;
            }
            if !long && (c == '\n' || c == '\r') {
                return Err(self.err("newline in single-line string literal"));
            }
            out.push(c);
            self.bump();
        }
    }

    fn escape(&mut self) -> Result<char, SyntaxError> {
        let at = self.mark();
        self.bump();
        let c = self.bump().ok_or_else(|| self.err_at(at, "unterminated escape"))?;
        Ok(match c {
            't' => '\t',
            'b' => '\u{8}',
            'n' => '\n',
            'r' => '\r',
            'f' => '\u{c}',
            '"' => '"',
            '\'' => '\'',
            '\\' => '\\',
            'u' | 'U' => {
                let len = if c == 'u' { 4 } else { 8 };
                let mut hex = String::new();
                for _ in 0..len {
                    match self.bump() {
                        Some(h) if h.is_ascii_hexdigit() => hex.push(h),
                        _ => return Err(self.err_at(at, "malformed unicode escape")),
                    }
                }
                let code = u32::from_str_radix(&hex, 16).expect("hex digits");
                char::from_u32(code).ok_or_else(|| self.err_at(at, "unicode escape is not a scalar value"))?
            }
            other => return Err(self.err_at(at, format!("unknown escape '\\{other}'"))),
        })
    }

    fn number(&mut self) -> Result<Term, SyntaxError> {
        let at = self.mark();
        let mut lexical = String::new();
        if let Some(sign @ ('+' | '-')) = self.peek() {
            lexical.push(sign);
            self.bump();
        }
        let mut int_digits = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            lexical.push(c);
            self.bump();
            int_digits += 1;
        }
        let mut decimal = false;
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            decimal = true;
            lexical.push('.');
            self.bump();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                lexical.push(c);
                self.bump();
            }
        }
        if !decimal && int_digits == 0 {
            return Err(self.err_at(at, format!("malformed number '{lexical}'")));
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            return Err(self.err_at(at, "double literals with exponents are not supported"));
        }
        if self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
            return Err(self.err_at(at, "malformed numeric literal"));
        }
        let datatype = if decimal { vocab::XSD_DECIMAL } else { vocab::XSD_INTEGER };
        Ok(Term::Literal(Literal::typed(lexical, Iri::from_static(datatype))))
    }
}

enum Name {
    Prefixed(Iri),
    Bare(String),
}
