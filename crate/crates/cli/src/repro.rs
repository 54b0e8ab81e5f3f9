//! Scenario configs compiled into the binary, selectable with `--scenario`.

pub struct Embedded {
    pub name: &'static str,
    /// Subcommand the scenario is written for.
    pub command: &'static str,
    pub text: &'static str,
}

macro_rules! embed {
    ($name:literal, $command:literal) => {
        Embedded {
            name: $name,
            command: $command,
            text: include_str!(concat!("../repro/", $name, ".toml")),
        }
    };
}

pub const EMBEDDED: &[Embedded] = &[
    embed!("example2", "verify"),
    embed!("example3", "verify"),
    embed!("minimizer", "verify"),
    embed!("fig1a", "sweep"),
    embed!("fig1b", "sweep"),
    embed!("fig1c", "sweep"),
    embed!("fig2", "sweep"),
    embed!("table1", "table1"),
    embed!("gcurve", "gcurve"),
    embed!("fig3", "energy"),
    embed!("fig4a", "energy"),
    embed!("fig4b", "energy"),
    embed!("fig4c", "energy"),
    embed!("fig4d", "energy"),
    embed!("ft_gaussian", "transform"),
    embed!("b0", "transform"),
];

pub fn find(name: &str) -> Option<&'static Embedded> {
    EMBEDDED.iter().find(|e| e.name == name)
}

/// First comment line of the config, without the `# ` marker.
pub fn summary(e: &Embedded) -> &'static str {
    e.text
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .unwrap_or("")
}
