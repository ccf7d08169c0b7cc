//! Example specs shipped with the binary.

pub const BUNDLED: &[(&str, &str)] = &[
    ("abhyankar_p2", include_str!("../specs/abhyankar_p2.json")),
    ("abhyankar_p3", include_str!("../specs/abhyankar_p3.json")),
    ("abhyankar_p5", include_str!("../specs/abhyankar_p5.json")),
    ("laurent_p2", include_str!("../specs/laurent_p2.json")),
    ("hahn_q_p3", include_str!("../specs/hahn_q_p3.json")),
    ("synthetic_dependent_cut", include_str!("../specs/synthetic_dependent_cut.json")),
    ("synthetic_rank2_independent", include_str!("../specs/synthetic_rank2_independent.json")),
    ("kummer_p3_independent", include_str!("../specs/kummer_p3_independent.json")),
    ("kummer_p3_dependent", include_str!("../specs/kummer_p3_dependent.json")),
    ("kummer_rank2_vp_in_h", include_str!("../specs/kummer_rank2_vp_in_h.json")),
];

pub fn find(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}
