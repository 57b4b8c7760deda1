//! Recursive-descent Turtle reader.
//!
//! Covers `@prefix`/`@base` and their SPARQL-style forms, prefixed names,
//! `a`, string literals in all four quote styles with escapes, language tags,
//! `^^` datatypes, numeric and boolean shorthands, predicate and object
//! lists, blank node property lists and collections.

use std::collections::{HashMap, HashSet};

use super::{Graph, Iri, Literal, Subject, Term, Triple};
use crate::error::{Error, Result};
use crate::vocab::{rdf, xsd};

/// Parses a Turtle document into a graph.
pub fn parse_turtle(document: &str) -> Result<Graph> {
    let mut parser = Parser::new(document);
    parser.document()?;
    Ok(parser.graph)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
    base: Option<String>,
    graph: Graph,
    labels: HashMap<String, String>,
    issued: HashSet<String>,
    next_blank: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.strip_prefix('\u{feff}').unwrap_or(src),
            pos: 0,
            line: 1,
            column: 1,
            base: None,
            graph: Graph::new(),
            labels: HashMap::new(),
            issued: HashSet::new(),
            next_blank: 0,
        }
    }

    // ---- character level -------------------------------------------------

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.bump();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{want}', found '{c}'"))),
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Case-insensitive keyword followed by a non-name character.
    fn at_keyword(&self, kw: &str) -> bool {
        let rest = self.rest();
        rest.len() >= kw.len()
            && rest.is_char_boundary(kw.len())
            && rest[..kw.len()].eq_ignore_ascii_case(kw)
            && !rest[kw.len()..].starts_with(|c: char| is_name_char(c) || c == ':')
    }

    fn consume_chars(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    // ---- statements ------------------------------------------------------

    fn document(&mut self) -> Result<()> {
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> Result<()> {
        if self.rest().starts_with("@prefix") {
            self.consume_chars("@prefix".len());
            self.prefix_decl()?;
            return self.expect('.');
        }
        if self.rest().starts_with("@base") {
            self.consume_chars("@base".len());
            self.base_decl()?;
            return self.expect('.');
        }
        if self.at_keyword("PREFIX") {
            self.consume_chars("PREFIX".len());
            return self.prefix_decl();
        }
        if self.at_keyword("BASE") {
            self.consume_chars("BASE".len());
            return self.base_decl();
        }
        self.triples()?;
        self.expect('.')
    }

    fn prefix_decl(&mut self) -> Result<()> {
        self.skip_ws();
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) {
                return Err(self.error(format!("invalid character '{c}' in prefix name")));
            }
            prefix.push(c);
            self.bump();
        }
        self.expect(':')?;
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.graph.bind_prefix(prefix, iri);
        Ok(())
    }

    fn base_decl(&mut self) -> Result<()> {
        self.skip_ws();
        let iri = self.iri_ref()?;
        self.base = Some(iri.as_str().to_owned());
        Ok(())
    }

    fn triples(&mut self) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some('[') => {
                let subject = self.blank_node_property_list()?;
                self.skip_ws();
                if self.peek() != Some('.') {
                    self.predicate_object_list(&subject)?;
                }
                Ok(())
            }
            _ => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)
            }
        }
    }

    fn subject(&mut self) -> Result<Subject> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                let term = self.collection()?;
                Subject::try_from(term).map_err(|_| self.error("literal in subject position"))
            }
            Some('_') if self.peek_nth(1) == Some(':') => Ok(Subject::BlankNode(self.blank_label()?)),
            Some('"') | Some('\'') => Err(self.error("literal in subject position")),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                Err(self.error("literal in subject position"))
            }
            Some(_) => Ok(Subject::Iri(self.iri()?)),
            None => Err(self.error("expected subject, found end of input")),
        }
    }

    fn predicate_object_list(&mut self, subject: &Subject) -> Result<()> {
        loop {
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            if !self.eat(';') {
                return Ok(());
            }
            // repeated and trailing semicolons are allowed
            loop {
                self.skip_ws();
                match self.peek() {
                    Some(';') => {
                        self.bump();
                    }
                    Some('.') | Some(']') | None => return Ok(()),
                    _ => break,
                }
            }
        }
    }

    fn verb(&mut self) -> Result<Iri> {
        self.skip_ws();
        if self.peek() == Some('a')
            && !self.rest()[1..].starts_with(|c: char| is_name_char(c) || c == ':')
        {
            self.bump();
            return Ok(Iri::new(rdf::TYPE));
        }
        match self.peek() {
            Some('_') | Some('[') | Some('(') | Some('"') | Some('\'') => {
                Err(self.error("predicate must be an IRI"))
            }
            _ => self.iri(),
        }
    }

    fn object_list(&mut self, subject: &Subject, predicate: &Iri) -> Result<()> {
        loop {
            let object = self.object()?;
            self.graph
                .insert(Triple::new(subject.clone(), predicate.clone(), object));
            if !self.eat(',') {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term> {
        self.skip_ws();
        match self.peek() {
            Some('[') => Ok(self.blank_node_property_list()?.into()),
            Some('(') => self.collection(),
            Some('_') if self.peek_nth(1) == Some(':') => Ok(Term::BlankNode(self.blank_label()?)),
            Some('"') | Some('\'') => self.rdf_literal().map(Term::Literal),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' => {
                self.numeric_literal().map(Term::Literal)
            }
            Some('.') if self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) => {
                self.numeric_literal().map(Term::Literal)
            }
            Some(_) if self.at_keyword("true") => {
                self.consume_chars(4);
                Ok(Literal::typed("true", Iri::new(xsd::BOOLEAN)).into())
            }
            Some(_) if self.at_keyword("false") => {
                self.consume_chars(5);
                Ok(Literal::typed("false", Iri::new(xsd::BOOLEAN)).into())
            }
            Some(_) => Ok(self.iri()?.into()),
            None => Err(self.error("expected object, found end of input")),
        }
    }

    // ---- blank nodes and collections ------------------------------------

    fn fresh_blank(&mut self) -> String {
        loop {
            let label = format!("b{}", self.next_blank);
            self.next_blank += 1;
            if self.issued.insert(label.clone()) {
                return label;
            }
        }
    }

    fn blank_label(&mut self) -> Result<String> {
        self.consume_chars(2);
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) && c != '%' && c != '\\' && c != ':' {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        while label.ends_with('.') {
            label.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        if label.is_empty() {
            return Err(self.error("empty blank node label"));
        }
        if let Some(mapped) = self.labels.get(&label) {
            return Ok(mapped.clone());
        }
        let mapped = if self.issued.insert(label.clone()) {
            label.clone()
        } else {
            self.fresh_blank()
        };
        self.labels.insert(label, mapped.clone());
        Ok(mapped)
    }

    fn blank_node_property_list(&mut self) -> Result<Subject> {
        self.expect('[')?;
        let node = Subject::BlankNode(self.fresh_blank());
        self.skip_ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&node)?;
        }
        self.expect(']')?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Term> {
        self.expect('(')?;
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.bump();
                    break;
                }
                None => return Err(self.error("unterminated collection")),
                _ => items.push(self.object()?),
            }
        }
        let mut tail = Term::iri(rdf::NIL);
        for item in items.into_iter().rev() {
            let cell = self.fresh_blank();
            let node = Subject::BlankNode(cell.clone());
            self.graph
                .insert(Triple::new(node.clone(), Iri::new(rdf::FIRST), item));
            self.graph.insert(Triple::new(node, Iri::new(rdf::REST), tail));
            tail = Term::BlankNode(cell);
        }
        Ok(tail)
    }

    // ---- IRIs ------------------------------------------------------------

    fn iri(&mut self) -> Result<Iri> {
        self.skip_ws();
        if self.peek() == Some('<') {
            self.iri_ref()
        } else {
            self.prefixed_name()
        }
    }

    fn iri_ref(&mut self) -> Result<Iri> {
        if self.peek() != Some('<') {
            return Err(self.error("expected IRI"));
        }
        self.bump();
        let mut raw = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => raw.push(self.unicode_escape()?),
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.error(format!("invalid character {c:?} in IRI")));
                }
                Some(c) => raw.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
        self.resolve(&raw)
    }

    fn resolve(&self, reference: &str) -> Result<Iri> {
        if has_scheme(reference) {
            return Ok(Iri::new(reference));
        }
        let base = self
            .base
            .as_deref()
            .ok_or_else(|| self.error(format!("relative IRI <{reference}> without a base")))?;
        Ok(Iri::new(resolve_reference(base, reference)))
    }

    fn prefixed_name(&mut self) -> Result<Iri> {
        let (line, column) = (self.line, self.column);
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if !is_name_char(c) || c == '%' || c == '\\' {
                return Err(match c {
                    c if prefix.is_empty() => self.error(format!("unexpected character '{c}'")),
                    _ => self.error(format!("unexpected character '{c}' in name")),
                });
            }
            prefix.push(c);
            self.bump();
        }
        if self.peek() != Some(':') {
            return Err(if prefix.is_empty() {
                self.error("unexpected end of input")
            } else {
                Error::Parse {
                    line,
                    column,
                    message: format!("unexpected token '{prefix}'"),
                }
            });
        }
        self.bump();
        let local = self.local_name()?;
        let ns = self
            .graph
            .prefixes()
            .get(&prefix)
            .ok_or(Error::UnknownPrefix {
                prefix: prefix.clone(),
                line,
                column,
            })?;
        Ok(Iri::new(format!("{}{}", ns.as_str(), local)))
    }

    fn local_name(&mut self) -> Result<String> {
        let mut local = String::new();
        let mut escaped_tail = false;
        while let Some(c) = self.peek() {
            escaped_tail = c == '\\';
            match c {
                '\\' => {
                    self.bump();
                    match self.bump() {
                        Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => local.push(e),
                        _ => return Err(self.error("invalid escape in local name")),
                    }
                }
                '%' => {
                    let (a, b) = (self.peek_nth(1), self.peek_nth(2));
                    if !(a.is_some_and(|c| c.is_ascii_hexdigit()) && b.is_some_and(|c| c.is_ascii_hexdigit())) {
                        return Err(self.error("invalid percent escape in local name"));
                    }
                    local.push('%');
                    self.bump();
                    local.push(self.bump().unwrap_or_default());
                    local.push(self.bump().unwrap_or_default());
                }
                c if is_name_char(c) || c == ':' => {
                    local.push(c);
                    self.bump();
                }
                _ => break,
            }
        }
        // a trailing '.' ends the statement, not the name
        while local.ends_with('.') && !escaped_tail {
            local.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        Ok(local)
    }

    // ---- literals --------------------------------------------------------

    fn rdf_literal(&mut self) -> Result<Literal> {
        let lexical = self.string()?;
        match self.peek() {
            Some('@') => {
                self.bump();
                let mut tag = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || (c == '-' && !tag.is_empty()) {
                        tag.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if tag.is_empty() || !tag.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    return Err(self.error("invalid language tag"));
                }
                Ok(Literal::lang(lexical, tag))
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') {
                    return Err(self.error("expected '^^'"));
                }
                let datatype = self.iri()?;
                Ok(Literal::typed(lexical, datatype))
            }
            _ => Ok(Literal::plain(lexical)),
        }
    }

    fn string(&mut self) -> Result<String> {
        let quote = self.bump().ok_or_else(|| self.error("expected string"))?;
        let long = self.peek() == Some(quote) && self.peek_nth(1) == Some(quote);
        if long {
            self.consume_chars(2);
        }
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated string literal")),
                Some(c) if c == quote => {
                    if !long {
                        return Ok(out);
                    }
                    if self.peek() == Some(quote) && self.peek_nth(1) == Some(quote) {
                        // up to two extra quotes may precede the closing triple
                        while self.peek_nth(2) == Some(quote) {
                            out.push(quote);
                            self.bump();
                        }
                        self.consume_chars(2);
                        return Ok(out);
                    }
                    out.push(c);
                }
                Some('\\') => out.push(self.string_escape()?),
                Some('\n') | Some('\r') if !long => {
                    return Err(self.error("line break in short string literal"));
                }
                Some(c) => out.push(c),
            }
        }
    }

    fn string_escape(&mut self) -> Result<char> {
        match self.peek() {
            Some('u') | Some('U') => self.unicode_escape(),
            Some(c) => {
                let out = match c {
                    't' => '\t',
                    'b' => '\u{8}',
                    'n' => '\n',
                    'r' => '\r',
                    'f' => '\u{c}',
                    '"' => '"',
                    '\'' => '\'',
                    '\\' => '\\',
                    _ => return Err(self.error(format!("invalid escape '\\{c}'"))),
                };
                self.bump();
                Ok(out)
            }
            None => Err(self.error("unterminated escape")),
        }
    }

    /// `\uXXXX` or `\UXXXXXXXX`; the backslash is already consumed.
    fn unicode_escape(&mut self) -> Result<char> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error("invalid escape")),
        };
        let mut hex = String::with_capacity(width);
        for _ in 0..width {
            match self.bump() {
                Some(c) if c.is_ascii_hexdigit() => hex.push(c),
                _ => return Err(self.error("invalid unicode escape")),
            }
        }
        u32::from_str_radix(&hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| self.error(format!("invalid code point U+{hex}")))
    }

    fn numeric_literal(&mut self) -> Result<Literal> {
        let mut text = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            text.push(c);
            self.bump();
        }
        let digits = |p: &mut Self, text: &mut String| {
            let mut n = 0;
            while let Some(c) = p.peek().filter(char::is_ascii_digit) {
                text.push(c);
                p.bump();
                n += 1;
            }
            n
        };
        let int_digits = digits(self, &mut text);
        let mut datatype = xsd::INTEGER;
        if self.peek() == Some('.') && self.peek_nth(1).is_some_and(|c| c.is_ascii_digit()) {
            text.push('.');
            self.bump();
            digits(self, &mut text);
            datatype = xsd::DECIMAL;
        } else if int_digits == 0 && !matches!(self.peek(), Some('e' | 'E')) {
            return Err(self.error("invalid number"));
        }
        if let Some(e @ ('e' | 'E')) = self.peek() {
            text.push(e);
            self.bump();
            if let Some(c @ ('+' | '-')) = self.peek() {
                text.push(c);
                self.bump();
            }
            if digits(self, &mut text) == 0 {
                return Err(self.error("invalid exponent"));
            }
            datatype = xsd::DOUBLE;
        }
        Ok(Literal::typed(text, Iri::new(datatype)))
    }
}

/// Characters allowed inside prefixes, local names and blank node labels.
fn is_name_char(c: char) -> bool {
    c.is_alphanumeric()
        || matches!(c, '_' | '-' | '.' | '%' | '\\' | '\u{00B7}')
        || ('\u{0300}'..='\u{036F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

fn has_scheme(s: &str) -> bool {
    let mut chars = s.chars();
    if !chars.next().is_some_and(|c| c.is_ascii_alphabetic()) {
        return false;
    }
    for c in chars {
        if c == ':' {
            return true;
        }
        if !(c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.')) {
            return false;
        }
    }
    false
}

/// Reference resolution for the reference shapes found in Turtle documents.
fn resolve_reference(base: &str, reference: &str) -> String {
    let without_fragment = base.split('#').next().unwrap_or(base);
    if reference.is_empty() {
        return without_fragment.to_owned();
    }
    if reference.starts_with('#') {
        return format!("{without_fragment}{reference}");
    }
    let scheme_end = base.find(':').map_or(0, |p| p + 1);
    if reference.starts_with("//") {
        return format!("{}{}", &base[..scheme_end], reference);
    }
    let authority_end = if base[scheme_end..].starts_with("//") {
        base[scheme_end + 2..]
            .find(['/', '?', '#'])
            .map_or(base.len(), |p| scheme_end + 2 + p)
    } else {
        scheme_end
    };
    if reference.starts_with('/') {
        return format!("{}{}", &base[..authority_end], remove_dot_segments(reference));
    }
    if reference.starts_with('?') {
        let no_query = without_fragment.split('?').next().unwrap_or(without_fragment);
        return format!("{no_query}{reference}");
    }
    let path_base = without_fragment.split('?').next().unwrap_or(without_fragment);
    let dir_end = path_base[authority_end..]
        .rfind('/')
        .map_or(authority_end, |p| authority_end + p + 1);
    let merged = if dir_end == authority_end && authority_end != scheme_end {
        format!("/{reference}")
    } else {
        format!("{}{}", &path_base[authority_end..dir_end], reference)
    };
    format!("{}{}", &base[..authority_end], remove_dot_segments(&merged))
}

fn remove_dot_segments(path: &str) -> String {
    let (path, suffix) = match path.find(['?', '#']) {
        Some(p) => (&path[..p], &path[p..]),
        None => (path, ""),
    };
    let mut out: Vec<&str> = Vec::new();
    let segments: Vec<&str> = path.split('/').collect();
    let last = segments.len().saturating_sub(1);
    for (i, seg) in segments.iter().enumerate() {
        match *seg {
            "." => {
                if i == last {
                    out.push("");
                }
            }
            ".." => {
                if out.len() > 1 {
                    out.pop();
                }
                if i == last {
                    out.push("");
                }
            }
            s => out.push(s),
        }
    }
    format!("{}{}", out.join("/"), suffix)
}
