use crate::field_linalg::Field;

/// Circuit gate over wire indices.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate<E> {
    /// Teleportation across the cover edge `from → to` with edge weight
    /// `weight`. On qudits this is `M(weight⁻¹) · H · U(angles)`.
    J {
        wire: usize,
        weight: E,
        angles: [E; 3],
        from: usize,
        to: usize,
    },
    CZ {
        a: usize,
        b: usize,
        weight: E,
    },
    /// `|m, n⟩ ↦ |m, n + weight·m⟩`.
    CX {
        control: usize,
        target: usize,
        weight: E,
    },
    /// Quadratic phase `|n⟩ ↦ ω^{weight·n²}|n⟩`.
    Phase {
        wire: usize,
        weight: E,
    },
}

impl<E> Gate<E> {
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::J { wire, .. } | Gate::Phase { wire, .. } => vec![wire],
            Gate::CZ { a, b, .. } => vec![a, b],
            Gate::CX {
                control, target, ..
            } => vec![control, target],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::J { .. } => "J",
            Gate::CZ { .. } => "CZ",
            Gate::CX { .. } => "CX",
            Gate::Phase { .. } => "PHASE",
        }
    }
}

/// Contiguous run of gates belonging to one peeled layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Section {
    pub layer: usize,
    pub start: usize,
    pub end: usize,
}

/// Wire `i` follows the vertex path `paths[i]`, starting at an input.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<F: Field> {
    pub field: F,
    pub labels: Vec<String>,
    pub paths: Vec<Vec<usize>>,
    pub gates: Vec<Gate<F::Elem>>,
    pub sections: Vec<Section>,
}

impl<F: Field> Circuit<F> {
    pub fn wires(&self) -> usize {
        self.paths.len()
    }

    pub fn count(&self, name: &str) -> usize {
        self.gates.iter().filter(|g| g.name() == name).count()
    }

    /// Structural checks: wire references, disjoint covering sections, J
    /// gates walking each path in order with invertible weights.
    pub fn validate(&self) -> Result<(), String> {
        let f = &self.field;
        let mut position = vec![0usize; self.wires()];
        for (i, g) in self.gates.iter().enumerate() {
            let ws = g.wires();
            if ws.iter().any(|&w| w >= self.wires()) {
                return Err(format!("gate {i} references a missing wire"));
            }
            if ws.len() == 2 && ws[0] == ws[1] {
                return Err(format!("gate {i} acts twice on wire {}", ws[0]));
            }
            if let Gate::J {
                wire,
                weight,
                from,
                to,
                ..
            } = *g
            {
                if f.is_zero(weight) {
                    return Err(format!("gate {i} has a zero teleportation weight"));
                }
                let p = &self.paths[wire];
                let at = position[wire];
                if p.get(at) != Some(&from) || p.get(at + 1) != Some(&to) {
                    return Err(format!("gate {i} does not follow the path of wire {wire}"));
                }
                position[wire] += 1;
            }
        }
        for (w, p) in self.paths.iter().enumerate() {
            if position[w] + 1 != p.len() {
                return Err(format!("wire {w} does not reach the end of its path"));
            }
        }
        let mut next = 0;
        for s in &self.sections {
            if s.start != next || s.end < s.start {
                return Err("sections are not contiguous".into());
            }
            next = s.end;
        }
        if next != self.gates.len() {
            return Err("sections do not cover the gate list".into());
        }
        Ok(())
    }

    /// One text row per wire, one column per gate.
    pub fn render_ascii(&self, fmt: impl Fn(F::Elem) -> String) -> String {
        let n = self.wires();
        let mut cols: Vec<Vec<String>> = Vec::new();
        let mut seps = Vec::new();
        for (i, g) in self.gates.iter().enumerate() {
            if self.sections.iter().any(|s| s.start == i && i > 0) {
                seps.push(cols.len());
            }
            let mut cells = vec![String::new(); n];
            let span = |cells: &mut Vec<String>, a: usize, b: usize| {
                for c in cells.iter_mut().take(a.max(b)).skip(a.min(b) + 1) {
                    *c = "|".into();
                }
            };
            match g {
                Gate::J { wire, weight, .. } => cells[*wire] = format!("J({})", fmt(*weight)),
                Gate::Phase { wire, weight } => cells[*wire] = format!("P({})", fmt(*weight)),
                Gate::CZ { a, b, weight } => {
                    cells[*a] = format!("Z({})", fmt(*weight));
                    cells[*b] = "Z".into();
                    span(&mut cells, *a, *b);
                }
                Gate::CX {
                    control,
                    target,
                    weight,
                } => {
                    cells[*control] = format!("o({})", fmt(*weight));
                    cells[*target] = "X".into();
                    span(&mut cells, *control, *target);
                }
            }
            cols.push(cells);
        }
        let width: Vec<usize> = cols
            .iter()
            .map(|c| c.iter().map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let label_width = self
            .paths
            .iter()
            .map(|p| self.labels[p[0]].chars().count())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for w in 0..n {
            let start = &self.labels[self.paths[w][0]];
            let end = &self.labels[*self.paths[w].last().expect("paths are nonempty")];
            out.push_str(&format!("{start:>label_width$} "));
            for (c, cells) in cols.iter().enumerate() {
                if seps.contains(&c) {
                    out.push_str("-:");
                }
                let cell = &cells[w];
                let pad = width[c] - cell.chars().count();
                out.push_str("--");
                out.push_str(cell);
                out.extend(std::iter::repeat('-').take(pad));
            }
            out.push_str(&format!("-- {end}\n"));
        }
        out
    }
}
