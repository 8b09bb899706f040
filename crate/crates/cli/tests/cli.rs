use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lnc_core::duality::ReversedFile;
use lnc_core::{FieldSpec, LayeredNetwork, Network, NetworkBuilder, Variant};

fn fig2() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data/fig2.json")
}

fn lnc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lnc")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = lnc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    lnc(args).status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn chain() -> Network {
    NetworkBuilder::new(&FieldSpec::prime(2).unwrap())
        .source("S")
        .node("a", Variant::Variant1)
        .destination("D")
        .edge("S", "a")
        .edge("a", "D")
        .build()
        .unwrap()
}

#[test]
fn outputs_are_deterministic() {
    let f = fig2();
    let f = f.to_str().unwrap();
    let runs: [&[&str]; 7] = [
        &["layer", f, "--variant1"],
        &["matrix", f, "--seed", "5"],
        &["mincut", f, "--seed", "5", "--trials", "4"],
        &["simulate", f, "--seed", "5", "--symbols", "3,4", "--timed"],
        &["reverse", f, "--seed", "5", "--dest", "D1"],
        &["precode", f, "--seed", "5", "--random"],
        &["export-dot", f, "--layered"],
    ];
    for args in runs {
        assert_eq!(ok(args), ok(args), "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("m.json");
    let f = fig2();
    let f = f.to_str().unwrap();
    let stdout = ok(&["matrix", f, "--seed", "9"]);
    ok(&["matrix", f, "--seed", "9", "--out", target.to_str().unwrap()]);
    assert_eq!(std::fs::read_to_string(&target).unwrap(), stdout);
    // only the output file is left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn outputs_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let f = fig2();
    let f = f.to_str().unwrap();

    let layered = ok(&["layer", f, "--variant1"]);
    let l = LayeredNetwork::from_json(&layered).unwrap();
    assert_eq!(l.depth(), 4);
    // a layered file feeds back in as a fixed point
    let lpath = write(dir.path(), "l.json", &layered);
    let again = ok(&["layer", lpath.to_str().unwrap()]);
    assert_eq!(LayeredNetwork::from_json(&again).unwrap().inserted().len(), 0);

    let conv: serde_json::Value = serde_json::from_str(&ok(&["convert", f])).unwrap();
    let net = serde_json::to_string(&conv["network"]).unwrap();
    assert!(Network::from_json(&net).unwrap().nodes().iter().all(|n| n.variant == Variant::Variant1));

    let rev: ReversedFile = serde_json::from_str(&ok(&["reverse", f, "--seed", "1", "--dest", "2"])).unwrap();
    assert_eq!(rev.destination, "D2");
    assert_eq!(rev.gains.len(), rev.network.edges.len());
    let net = rev.network.into_network().unwrap().validated().unwrap();
    assert!(net.nodes().iter().filter(|n| n.kind == lnc_core::NodeKind::Intermediate).all(|n| n.variant == Variant::Variant2));

    let m: serde_json::Value = serde_json::from_str(&ok(&["matrix", f, "--seed", "1"])).unwrap();
    assert_eq!(m["layer_sizes"], serde_json::json!([2, 2, 4, 3]));
    assert_eq!(m["individual"].as_array().unwrap().len(), 2);
}

#[test]
fn assignment_files_reproduce_seeded_draws() {
    let dir = tempfile::tempdir().unwrap();
    let f = fig2();
    let f = f.to_str().unwrap();
    let net = Network::from_json(&std::fs::read_to_string(f).unwrap()).unwrap();
    let asg = lnc_core::assign_random(&net, 21);
    let explicit = write(dir.path(), "a.json", &asg.to_json());
    let bare = write(dir.path(), "b.json", r#"{"prng": "pcg64-splitmix64", "seed": 21}"#);
    let seeded = ok(&["matrix", f, "--seed", "21"]);
    assert_eq!(ok(&["matrix", f, "--assignment", explicit.to_str().unwrap()]), seeded);
    assert_eq!(ok(&["matrix", f, "--assignment", bare.to_str().unwrap()]), seeded);
}

#[test]
fn simulate_reports_the_buffered_packet() {
    let f = fig2();
    let v: serde_json::Value =
        serde_json::from_str(&ok(&["simulate", f.to_str().unwrap(), "--seed", "2", "--symbols", "1,2", "--timed"])).unwrap();
    assert_eq!(v["buffer_depths"]["N2"], 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = fig2();
    let f = f.to_str().unwrap();
    assert_eq!(code(&["validate", f]), 0);
    assert_eq!(code(&["mincut", f]), 2, "seed is required");
    assert_eq!(code(&["matrix", f]), 2, "coefficients are required");
    assert_eq!(code(&["validate", "/no/such/file.json"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["validate", f, "--field", "6"]), 2);
    let junk = write(dir.path(), "junk.json", "{ not json");
    assert_eq!(code(&["validate", junk.to_str().unwrap()]), 2);

    let mut cyclic = chain().to_file();
    cyclic.edges.push(lnc_core::netgraph::EdgeRecord { id: "a->b".into(), from: "a".into(), to: "b".into() });
    cyclic.edges.push(lnc_core::netgraph::EdgeRecord { id: "b->a".into(), from: "b".into(), to: "a".into() });
    cyclic.nodes.push(lnc_core::netgraph::Node::new("b", lnc_core::NodeKind::Intermediate, Variant::Variant1));
    let cyclic = write(dir.path(), "cyclic.json", &serde_json::to_string(&cyclic).unwrap());
    assert_eq!(code(&["validate", cyclic.to_str().unwrap()]), 1);
    assert_eq!(code(&["layer", cyclic.to_str().unwrap()]), 1);

    let zero = write(dir.path(), "p.json", "[[0, 0], [0, 0]]");
    assert_eq!(code(&["precode", f, "--seed", "1", "--matrix", zero.to_str().unwrap()]), 1, "rank deficient");
    assert_eq!(code(&["mincut", f, "--seed", "1", "--field", "2"]), 1, "q must exceed K");
    assert_eq!(code(&["reverse", f, "--seed", "1", "--dest", "D9"]), 1);
}

/// Tokens of the DOT subset the exporter emits.
#[derive(Debug, PartialEq)]
enum Tok {
    Id(String),
    Sym(&'static str),
}

fn lex(s: &str) -> Vec<Tok> {
    let mut out = Vec::new();
    let mut it = s.chars().peekable();
    while let Some(&c) = it.peek() {
        match c {
            c if c.is_whitespace() => {
                it.next();
            }
            '"' => {
                it.next();
                let mut id = String::new();
                loop {
                    match it.next().expect("unterminated string") {
                        '"' => break,
                        '\\' => id.push(it.next().expect("dangling escape")),
                        c => id.push(c),
                    }
                }
                out.push(Tok::Id(id));
            }
            '-' => {
                it.next();
                assert_eq!(it.next(), Some('>'), "only directed edges");
                out.push(Tok::Sym("->"));
            }
            '{' | '}' | '[' | ']' | ';' | '=' | ',' => {
                it.next();
                out.push(Tok::Sym(["{", "}", "[", "]", ";", "=", ","][("{}[];=,").find(c).unwrap()]));
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut id = String::new();
                while let Some(&c) = it.peek().filter(|c| c.is_alphanumeric() || **c == '_' || **c == '.') {
                    id.push(c);
                    it.next();
                }
                out.push(Tok::Id(id));
            }
            c => panic!("unexpected character {c:?}"),
        }
    }
    out
}

struct Dot {
    nodes: Vec<String>,
    edges: Vec<(String, String)>,
    ranks: Vec<Vec<String>>,
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn next(&mut self) -> &Tok {
        self.pos += 1;
        self.toks.get(self.pos - 1).expect("unexpected end")
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn sym(&mut self, s: &'static str) {
        let at = self.pos;
        assert_eq!(self.next(), &Tok::Sym(s), "at token {at}");
    }

    fn id(&mut self) -> String {
        match self.next() {
            Tok::Id(s) => s.clone(),
            t => panic!("expected id, got {t:?}"),
        }
    }

    fn attrs(&mut self) {
        self.sym("[");
        loop {
            self.id();
            self.sym("=");
            self.id();
            match self.next() {
                Tok::Sym(",") => continue,
                Tok::Sym("]") => break,
                t => panic!("bad attribute list at {t:?}"),
            }
        }
    }

    /// `stmt_list := (stmt ';')*` until the closing brace.
    fn stmts(&mut self, dot: &mut Dot, rank: Option<&mut Vec<String>>) {
        let mut rank = rank;
        while self.peek() != Some(&Tok::Sym("}")) {
            let first = self.id();
            match self.peek() {
                Some(Tok::Sym("=")) => {
                    self.next();
                    self.id();
                }
                Some(Tok::Sym("->")) => {
                    self.next();
                    let to = self.id();
                    self.attrs();
                    dot.edges.push((first, to));
                }
                Some(Tok::Sym("[")) => {
                    self.attrs();
                    dot.nodes.push(first);
                }
                Some(Tok::Id(_)) if first == "subgraph" => {
                    self.id();
                    self.sym("{");
                    let mut members = Vec::new();
                    self.stmts(dot, Some(&mut members));
                    self.sym("}");
                    dot.ranks.push(members);
                    continue;
                }
                Some(Tok::Sym(";")) => rank.as_mut().expect("bare id outside a subgraph").push(first),
                t => panic!("unexpected {t:?}"),
            }
            self.sym(";");
        }
    }
}

fn parse_dot(text: &str) -> Dot {
    let mut p = Parser { toks: lex(text), pos: 0 };
    assert_eq!(p.id(), "digraph");
    p.id();
    p.sym("{");
    let mut dot = Dot { nodes: Vec::new(), edges: Vec::new(), ranks: Vec::new() };
    p.stmts(&mut dot, None);
    p.sym("}");
    assert_eq!(p.pos, p.toks.len(), "trailing tokens");
    for (a, b) in &dot.edges {
        assert!(dot.nodes.contains(a) && dot.nodes.contains(b), "edge {a} -> {b} to undeclared node");
    }
    dot
}

#[test]
fn chain_exports_as_a_three_node_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "chain.json", &chain().to_json());
    let dot = parse_dot(&ok(&["export-dot", path.to_str().unwrap()]));
    assert_eq!(dot.nodes, ["S", "a", "D"]);
    assert_eq!(dot.edges, [("S".to_string(), "a".to_string()), ("a".to_string(), "D".to_string())]);
    assert!(dot.ranks.is_empty());
}

#[test]
fn layered_export_clusters_each_layer() {
    let f = fig2();
    let dot = parse_dot(&ok(&["export-dot", f.to_str().unwrap(), "--layered"]));
    let l = LayeredNetwork::from_json(&ok(&["layer", f.to_str().unwrap()])).unwrap();
    let sizes: Vec<usize> = dot.ranks.iter().map(Vec::len).collect();
    assert_eq!(sizes, l.layer_sizes());
    assert_eq!(dot.edges.len(), l.network().edges().len());
}

#[test]
fn escaped_ids_survive_the_grammar() {
    let dir = tempfile::tempdir().unwrap();
    let net = NetworkBuilder::new(&FieldSpec::prime(2).unwrap())
        .source("S \"src\"")
        .node("a\\b", Variant::Variant1)
        .destination("D")
        .edge("S \"src\"", "a\\b")
        .edge("a\\b", "D")
        .build()
        .unwrap();
    let path = write(dir.path(), "odd.json", &net.to_json());
    let dot = parse_dot(&ok(&["export-dot", path.to_str().unwrap()]));
    assert_eq!(dot.nodes, ["S \"src\"", "a\\b", "D"]);
}
