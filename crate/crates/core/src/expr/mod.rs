//! Objective functions as expression trees.
//!
//! An [`Expr`] is parsed from text against an ordered list of declared
//! variable names. Repeated occurrences of a name always refer to the same
//! variable. Evaluation, forward-mode gradients and naive interval
//! evaluation all walk the same tree.

mod eval;
mod parser;

use std::fmt;

pub use eval::{DomainReason, EvalError};
pub use parser::{check_variable_name, ParseError};

/// Names reserved for built-in functions.
pub const FUNCTIONS: [&str; 5] = ["exp", "log", "sin", "cos", "sqrt"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl UnaryOp {
    pub fn from_function_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => UnaryOp::Exp,
            "log" => UnaryOp::Log,
            "sin" => UnaryOp::Sin,
            "cos" => UnaryOp::Cos,
            "sqrt" => UnaryOp::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            UnaryOp::Neg => "-",
            UnaryOp::Exp => "exp",
            UnaryOp::Log => "log",
            UnaryOp::Sin => "sin",
            UnaryOp::Cos => "cos",
            UnaryOp::Sqrt => "sqrt",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    pub fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

/// A node of the expression tree. Variables are indices into the owning
/// [`Expr`]'s variable list.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Unary(UnaryOp, Box<Node>),
    Binary(BinaryOp, Box<Node>, Box<Node>),
}

impl Node {
    pub fn unary(op: UnaryOp, child: Node) -> Node {
        Node::Unary(op, Box::new(child))
    }

    pub fn binary(op: BinaryOp, lhs: Node, rhs: Node) -> Node {
        Node::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// The exponent as an `i32` when it is a constant integer, possibly negated.
    pub(crate) fn as_integer(&self) -> Option<i32> {
        match self {
            Node::Const(c) if c.fract() == 0.0 && c.abs() <= i32::MAX as f64 => Some(*c as i32),
            Node::Unary(UnaryOp::Neg, inner) => inner.as_integer().map(|k| -k),
            _ => None,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Const(_) | Node::Var(_) => 1,
            Node::Unary(_, c) => 1 + c.depth(),
            Node::Binary(_, l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    fn collect_vars(&self, used: &mut [bool]) {
        match self {
            Node::Const(_) => {}
            Node::Var(i) => used[*i] = true,
            Node::Unary(_, c) => c.collect_vars(used),
            Node::Binary(_, l, r) => {
                l.collect_vars(used);
                r.collect_vars(used);
            }
        }
    }

    fn write(&self, vars: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Const(c) => write!(f, "{c:?}"),
            Node::Var(i) => f.write_str(&vars[*i]),
            Node::Unary(UnaryOp::Neg, c) => {
                f.write_str("(-")?;
                c.write(vars, f)?;
                f.write_str(")")
            }
            Node::Unary(op, c) => {
                write!(f, "{}(", op.name())?;
                c.write(vars, f)?;
                f.write_str(")")
            }
            Node::Binary(op, l, r) => {
                f.write_str("(")?;
                l.write(vars, f)?;
                write!(f, " {} ", op.symbol())?;
                r.write(vars, f)?;
                f.write_str(")")
            }
        }
    }
}

/// A parsed objective `f: ℝⁿ → ℝ` over an ordered variable list.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    vars: Vec<String>,
    tape: eval::Tape,
}

impl Expr {
    /// Parses `src` with `vars` as the declared variables, in argument order.
    pub fn parse<S: AsRef<str>>(src: &str, vars: &[S]) -> Result<Expr, ParseError> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_owned()).collect();
        let root = parser::parse(src, &vars)?;
        Ok(Expr::assemble(root, vars))
    }

    /// Builds an expression from an existing tree.
    ///
    /// # Panics
    ///
    /// Panics if the tree references a variable index outside `vars`.
    pub fn from_node(root: Node, vars: Vec<String>) -> Expr {
        check_indices(&root, vars.len());
        Expr::assemble(root, vars)
    }

    fn assemble(root: Node, vars: Vec<String>) -> Expr {
        let tape = eval::Tape::compile(&root);
        Expr { root, vars, tape }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of declared variables, i.e. the length of an evaluation point.
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Declared variables that actually occur in the tree.
    pub fn used_vars(&self) -> Vec<&str> {
        let mut used = vec![false; self.vars.len()];
        self.root.collect_vars(&mut used);
        self.vars
            .iter()
            .zip(used)
            .filter_map(|(v, u)| u.then_some(v.as_str()))
            .collect()
    }

    /// `true` when the tree contains only constants, variables, the four
    /// arithmetic operations, negation and constant-integer powers.
    pub fn is_arithmetic(&self) -> bool {
        fn go(n: &Node) -> bool {
            match n {
                Node::Const(_) | Node::Var(_) => true,
                Node::Unary(UnaryOp::Neg, c) => go(c),
                Node::Unary(..) => false,
                Node::Binary(BinaryOp::Pow, l, r) => r.as_integer().is_some() && go(l),
                Node::Binary(_, l, r) => go(l) && go(r),
            }
        }
        go(&self.root)
    }

    pub(crate) fn node_text(&self, node: &Node) -> String {
        struct Show<'a>(&'a Node, &'a [String]);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(self.1, f)
            }
        }
        Show(node, &self.vars).to_string()
    }
}

fn check_indices(node: &Node, n: usize) {
    match node {
        Node::Const(_) => {}
        Node::Var(i) => assert!(*i < n, "variable index {i} out of range for {n} variables"),
        Node::Unary(_, c) => check_indices(c, n),
        Node::Binary(_, l, r) => {
            check_indices(l, n);
            check_indices(r, n);
        }
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesized text that parses back to the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(&self.vars, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var(i: usize) -> Node {
        Node::Var(i)
    }

    #[test]
    fn display_is_fully_parenthesized() {
        let e = Expr::parse("x*(1-x)", &["x"]).unwrap();
        assert_eq!(e.to_string(), "(x * (1.0 - x))");
        let e = Expr::parse("-x^2 + exp(y)/2", &["x", "y"]).unwrap();
        assert_eq!(e.to_string(), "((-(x ^ 2.0)) + (exp(y) / 2.0))");
    }

    #[test]
    fn arithmetic_detection() {
        let vars = ["x", "y"];
        assert!(Expr::parse("x*(1-x) + y^3/2", &vars).unwrap().is_arithmetic());
        assert!(!Expr::parse("x^y", &vars).unwrap().is_arithmetic());
        assert!(!Expr::parse("exp(x)", &vars).unwrap().is_arithmetic());
    }

    #[test]
    fn used_vars_subset() {
        let e = Expr::parse("2*z", &["x", "z"]).unwrap();
        assert_eq!(e.used_vars(), vec!["z"]);
        assert_eq!(e.arity(), 2);
    }

    #[test]
    #[should_panic]
    fn from_node_rejects_bad_index() {
        Expr::from_node(var(3), vec!["x".into()]);
    }

    /// Random trees over `n` variables with non-negative constants, since
    /// the grammar has no negative literals.
    pub(crate) fn arb_node(n: usize) -> impl Strategy<Value = Node> {
        let leaf = prop_oneof![
            (0u32..50).prop_map(|k| Node::Const(k as f64 / 4.0)),
            (0..n).prop_map(Node::Var),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (
                    prop_oneof![
                        Just(UnaryOp::Neg),
                        Just(UnaryOp::Exp),
                        Just(UnaryOp::Log),
                        Just(UnaryOp::Sin),
                        Just(UnaryOp::Cos),
                        Just(UnaryOp::Sqrt),
                    ],
                    inner.clone()
                )
                    .prop_map(|(op, c)| Node::unary(op, c)),
                (
                    prop_oneof![
                        Just(BinaryOp::Add),
                        Just(BinaryOp::Sub),
                        Just(BinaryOp::Mul),
                        Just(BinaryOp::Div),
                        Just(BinaryOp::Pow),
                    ],
                    inner.clone(),
                    inner
                )
                    .prop_map(|(op, l, r)| Node::binary(op, l, r)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_then_parse_round_trips(root in arb_node(3)) {
            let vars = vec!["x".to_string(), "y".to_string(), "w1".to_string()];
            let e = Expr::from_node(root, vars.clone());
            let reparsed = Expr::parse(&e.to_string(), &vars).unwrap();
            prop_assert_eq!(reparsed, e);
        }
    }
}
