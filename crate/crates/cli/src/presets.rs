//! Bundled example scenarios, compiled into the binary so that a bare name
//! works anywhere. The same files ship in the repository's configs/
//! directory as editable starting points.

pub const PRESETS: &[(&str, &str)] = &[
    ("table1a", include_str!("../../../configs/table1a.json")),
    ("table1b", include_str!("../../../configs/table1b.json")),
    ("table2", include_str!("../../../configs/table2.json")),
    ("fig1", include_str!("../../../configs/fig1.json")),
    ("fig2", include_str!("../../../configs/fig2.json")),
    ("fig3", include_str!("../../../configs/fig3.json")),
    ("fig4", include_str!("../../../configs/fig4.json")),
];

pub fn preset(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}
