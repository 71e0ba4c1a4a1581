//! S-expressions with source positions, and a deterministic printer.

use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Positions are ignored by equality.
#[derive(Clone, Debug)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl PartialEq for Sexp {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Sexp::Atom(a, _), Sexp::Atom(b, _)) => a == b,
            (Sexp::List(a, _), Sexp::List(b, _)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Sexp {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error("{0}: unexpected `)`")]
    Unbalanced(Pos),
    #[error("{0}: unclosed `(`")]
    Unclosed(Pos),
}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp::Atom(s.into(), Pos::default())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items, Pos::default())
    }

    /// `(head items…)`.
    pub fn form(head: &str, items: Vec<Sexp>) -> Sexp {
        let mut all = vec![Sexp::atom(head)];
        all.extend(items);
        Sexp::list(all)
    }

    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Some(items),
            Sexp::Atom(..) => None,
        }
    }

    /// The head symbol of a list whose first element is an atom.
    pub fn head(&self) -> Option<&str> {
        self.as_list()?.first()?.as_atom()
    }

    fn flat(&self, out: &mut String) {
        match self {
            Sexp::Atom(s, _) => out.push_str(s),
            Sexp::List(items, _) => {
                out.push('(');
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    it.flat(out);
                }
                out.push(')');
            }
        }
    }

    /// One line.
    pub fn to_flat(&self) -> String {
        let mut s = String::new();
        self.flat(&mut s);
        s
    }

    /// Lists wider than 80 columns put each argument after the head on its
    /// own line, indented by two.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        self.pretty_at(0, &mut out);
        out
    }

    fn pretty_at(&self, indent: usize, out: &mut String) {
        let flat = self.to_flat();
        let items = match self {
            Sexp::List(items, _) if indent + flat.chars().count() > 80 && items.len() > 1 => items,
            _ => {
                out.push_str(&flat);
                return;
            }
        };
        out.push('(');
        items[0].pretty_at(indent + 1, out);
        for it in &items[1..] {
            out.push('\n');
            out.push_str(&" ".repeat(indent + 2));
            it.pretty_at(indent + 2, out);
        }
        out.push(')');
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_flat())
    }
}

/// All top-level expressions of `text`. `;` starts a comment.
pub fn read_all(text: &str) -> Result<Vec<Sexp>, ReadError> {
    let mut stack: Vec<(Vec<Sexp>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = text.chars().peekable();
    let mut atom: Option<(String, Pos)> = None;
    let flush = |atom: &mut Option<(String, Pos)>, stack: &mut Vec<(Vec<Sexp>, Pos)>, top: &mut Vec<Sexp>| {
        if let Some((s, p)) = atom.take() {
            let e = Sexp::Atom(s, p);
            match stack.last_mut() {
                Some((items, _)) => items.push(e),
                None => top.push(e),
            }
        }
    };
    while let Some(c) = chars.next() {
        let here = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
        match c {
            ';' => {
                flush(&mut atom, &mut stack, &mut top);
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '(' => {
                flush(&mut atom, &mut stack, &mut top);
                stack.push((Vec::new(), here));
            }
            ')' => {
                flush(&mut atom, &mut stack, &mut top);
                let (items, p) = stack.pop().ok_or(ReadError::Unbalanced(here))?;
                let e = Sexp::List(items, p);
                match stack.last_mut() {
                    Some((items, _)) => items.push(e),
                    None => top.push(e),
                }
            }
            c if c.is_whitespace() => flush(&mut atom, &mut stack, &mut top),
            c => match &mut atom {
                Some((s, _)) => s.push(c),
                None => atom = Some((c.to_string(), here)),
            },
        }
    }
    flush(&mut atom, &mut stack, &mut top);
    if let Some((_, p)) = stack.pop() {
        return Err(ReadError::Unclosed(p));
    }
    Ok(top)
}
