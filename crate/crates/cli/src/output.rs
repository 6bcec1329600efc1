use std::fmt;

/// Collects command output for either the human or the `key=value` line format.
pub struct Output {
    machine: bool,
    lines: Vec<String>,
}

impl Output {
    pub fn new(machine: bool) -> Self {
        Output { machine, lines: Vec::new() }
    }

    /// A named value: `key=value` or `key: value`.
    pub fn field(&mut self, key: &str, value: impl fmt::Display) {
        let line = if self.machine { format!("{key}={value}") } else { format!("{key}: {value}") };
        self.lines.push(line);
    }

    /// The main result: `key=value` in machine mode, the bare value otherwise.
    pub fn primary(&mut self, key: &str, value: impl fmt::Display) {
        let line = if self.machine { format!("{key}={value}") } else { value.to_string() };
        self.lines.push(line);
    }

    pub fn is_machine(&self) -> bool {
        self.machine
    }

    pub fn print(&self) {
        for l in &self.lines {
            println!("{l}");
        }
    }
}

/// Comma-joined list without spaces, stable for machine output.
pub fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}
