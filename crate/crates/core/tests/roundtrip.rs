//! Text formats survive a round trip and feed back into the other modules.

use cwkit::gen::{generate, GenMode, GenSpec};
use cwkit::graph::Graph;
use cwkit::kexpr::{chromatic_oracle, KExpr};
use cwkit::patterns::parse_pattern;
use cwkit::pipelines::{chromatic_via_certificate, diamond_reduce, reassemble_expression, reduce_k3_c5_s123, verify_certificate, Certificate};

fn free_spec(stream: u64) -> GenSpec {
    GenSpec {
        seed: 7,
        stream,
        mode: GenMode::RandomFree { n: 12, patterns: vec!["diamond".into(), "P1+2P2".into()], density: 0.4 },
    }
}

#[test]
fn specs_regenerate_the_same_graph() {
    for stream in 0..5 {
        let spec = free_spec(stream);
        let again = GenSpec::parse(&spec.to_text()).unwrap();
        assert_eq!(again, spec);
        assert_eq!(generate(&again).unwrap().graph(), generate(&spec).unwrap().graph());
    }
}

#[test]
fn parsed_certificates_still_verify() {
    for stream in 0..10 {
        let g = generate(&free_spec(stream)).unwrap().graph().clone();
        let g = Graph::parse_text(&g.to_text()).unwrap();
        let c = diamond_reduce(&g).unwrap();
        let back = Certificate::parse(&c.to_text()).unwrap();
        assert_eq!(back.to_text(), c.to_text());
        assert!(verify_certificate(&g, &back));
        assert_eq!(chromatic_via_certificate(&g, &back).unwrap().chromatic, chromatic_oracle(&g).unwrap());
    }
}

#[test]
fn odd_cycle_expression_reads_back() {
    let g = Graph::from_graph6(&parse_pattern("C9").unwrap().to_graph6()).unwrap();
    let c = reduce_k3_c5_s123(&g).unwrap();
    let e = reassemble_expression(&g, &c).unwrap().expect("cycle reassembles");
    let back = KExpr::parse(&e.to_string()).unwrap();
    assert!(back.validate_against(&g));
}
