use std::io::Write;

/// One emitted sample of the validation circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub t: f64,
    /// Source voltage (V).
    pub e: f64,
    /// Device terminal voltage (V).
    pub u: f64,
    pub i: f64,
    pub z: Vec<f64>,
    /// Memductance (S).
    pub g: f64,
    /// `(u_S, u_e, u_t)` for the double-barrier device.
    pub regions: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub t0: f64,
    pub period: f64,
    pub records: Vec<TraceRecord>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn voltage(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.u).collect()
    }

    pub fn current(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.i).collect()
    }

    pub fn memductance(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.g).collect()
    }

    pub fn state(&self, k: usize) -> Vec<f64> {
        self.records.iter().map(|r| r.z[k]).collect()
    }

    pub fn header(&self) -> String {
        let dim = self.records.first().map_or(1, |r| r.z.len());
        let mut cols = vec!["t_s", "e_v", "u_v", "i_a"]
            .into_iter()
            .map(String::from)
            .collect::<Vec<_>>();
        if dim == 1 {
            cols.push("z".into());
        } else {
            cols.extend((0..dim).map(|k| format!("z{k}")));
        }
        cols.push("G_s".into());
        if self.records.first().is_some_and(|r| r.regions.is_some()) {
            cols.extend(["u_s_v", "u_e_v", "u_t_v"].map(String::from));
        }
        cols.join(",")
    }

    /// Writes `t_s,e_v,u_v,i_a,z,G_s[,u_s_v,u_e_v,u_t_v]`. Numbers use the
    /// shortest round-trip representation, so output is reproducible.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{}", self.header())?;
        let mut line = String::new();
        for r in &self.records {
            line.clear();
            use std::fmt::Write as _;
            let _ = write!(line, "{},{},{},{}", r.t, r.e, r.u, r.i);
            for z in &r.z {
                let _ = write!(line, ",{z}");
            }
            let _ = write!(line, ",{}", r.g);
            if let Some([a, b, c]) = r.regions {
                let _ = write!(line, ",{a},{b},{c}");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}
