//! Versioned CSV and binary encodings of [`FourierTable`].
//!
//! CSV: a `# crownheat-fourier-table v1` line, a `# grid ...` line with the
//! grid as key=value pairs, the header `j,k,re,im`, then one row per entry.
//! Binary: magic `CHFT`, u32 version, the grid, then (re, im) pairs, all
//! little-endian.

use std::io::{BufRead, Read, Write};

use super::{FourierTable, GridSpec};
use crate::error::{Error, Result};
use crate::models::Model;
use crate::C64;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"CHFT";

fn fmt_err(m: impl Into<String>) -> Error {
    Error::Format(m.into())
}

impl GridSpec {
    /// `model=H2 r_max=4 n_r=160 ...`, floats in shortest round-trip form.
    pub fn to_pairs(&self) -> String {
        format!(
            "model={} r_max={:?} n_r={} n_theta={} n_phi={} lambda={:?} n_mu={}",
            self.model.name(),
            self.r_max,
            self.n_r,
            self.n_theta,
            self.n_phi,
            self.lambda,
            self.n_mu
        )
    }

    pub fn from_pairs(s: &str) -> Result<Self> {
        let mut model = None;
        let (mut r_max, mut lambda) = (None, None);
        let (mut n_r, mut n_theta, mut n_phi, mut n_mu) = (None, None, None, None);
        for pair in s.split_whitespace() {
            let (k, v) = pair.split_once('=').ok_or_else(|| fmt_err(format!("bad pair {pair}")))?;
            let f = || v.parse::<f64>().map_err(|_| fmt_err(format!("bad number {v}")));
            let u = || v.parse::<usize>().map_err(|_| fmt_err(format!("bad count {v}")));
            match k {
                "model" => model = Some(Model::from_name(v).ok_or_else(|| fmt_err(format!("unknown model {v}")))?),
                "r_max" => r_max = Some(f()?),
                "lambda" => lambda = Some(f()?),
                "n_r" => n_r = Some(u()?),
                "n_theta" => n_theta = Some(u()?),
                "n_phi" => n_phi = Some(u()?),
                "n_mu" => n_mu = Some(u()?),
                _ => return Err(fmt_err(format!("unknown grid key {k}"))),
            }
        }
        let miss = |k: &str| fmt_err(format!("grid key {k} missing"));
        Ok(GridSpec {
            model: model.ok_or_else(|| miss("model"))?,
            r_max: r_max.ok_or_else(|| miss("r_max"))?,
            n_r: n_r.ok_or_else(|| miss("n_r"))?,
            n_theta: n_theta.ok_or_else(|| miss("n_theta"))?,
            n_phi: n_phi.ok_or_else(|| miss("n_phi"))?,
            lambda: lambda.ok_or_else(|| miss("lambda"))?,
            n_mu: n_mu.ok_or_else(|| miss("n_mu"))?,
        })
    }
}

impl FourierTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# crownheat-fourier-table v{FORMAT_VERSION}")?;
        writeln!(w, "# grid {}", self.grid.to_pairs())?;
        writeln!(w, "j,k,re,im")?;
        let n = self.grid.n_mu;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{},{:?},{:?}", i / n, i % n, v.re, v.im)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = || lines.next().transpose().map_err(Error::from)?.ok_or_else(|| fmt_err("unexpected end of table"));
        let version = next()?;
        if version.trim() != format!("# crownheat-fourier-table v{FORMAT_VERSION}") {
            return Err(fmt_err(format!("unsupported header {version:?}")));
        }
        let grid_line = next()?;
        let grid = GridSpec::from_pairs(
            grid_line.strip_prefix("# grid ").ok_or_else(|| fmt_err("missing grid line"))?,
        )?;
        if next()?.trim() != "j,k,re,im" {
            return Err(fmt_err("missing column header"));
        }
        let mut t = FourierTable::zeros(grid);
        let n = grid.n_mu;
        let mut seen = 0;
        while let Ok(line) = next() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 4 {
                return Err(fmt_err(format!("bad row {line:?}")));
            }
            let j: usize = cols[0].parse().map_err(|_| fmt_err("bad j"))?;
            let k: usize = cols[1].parse().map_err(|_| fmt_err("bad k"))?;
            let re: f64 = cols[2].parse().map_err(|_| fmt_err("bad re"))?;
            let im: f64 = cols[3].parse().map_err(|_| fmt_err("bad im"))?;
            if k >= n || j >= grid.n_ang() {
                return Err(fmt_err(format!("index ({j}, {k}) outside the grid")));
            }
            t.values[j * n + k] = C64::new(re, im);
            seen += 1;
        }
        if seen != t.values.len() {
            return Err(fmt_err(format!("{seen} rows for {} entries", t.values.len())));
        }
        Ok(t)
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        let g = &self.grid;
        w.write_all(&[match g.model {
            Model::H2 => 2u8,
            Model::H3 => 3u8,
        }])?;
        for x in [g.r_max, g.lambda] {
            w.write_all(&x.to_le_bytes())?;
        }
        for n in [g.n_r, g.n_theta, g.n_phi, g.n_mu] {
            w.write_all(&(n as u64).to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.re.to_le_bytes())?;
            w.write_all(&v.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(fmt_err("not a fourier table"));
        }
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b4)?;
        let version = u32::from_le_bytes(b4);
        if version != FORMAT_VERSION {
            return Err(fmt_err(format!("unsupported version {version}")));
        }
        let mut b1 = [0u8; 1];
        r.read_exact(&mut b1)?;
        let model = match b1[0] {
            2 => Model::H2,
            3 => Model::H3,
            m => return Err(fmt_err(format!("unknown model tag {m}"))),
        };
        let mut b8 = [0u8; 8];
        let mut f = || -> Result<f64> {
            r.read_exact(&mut b8)?;
            Ok(f64::from_le_bytes(b8))
        };
        let (r_max, lambda) = (f()?, f()?);
        let mut b8 = [0u8; 8];
        let mut u = || -> Result<usize> {
            r.read_exact(&mut b8)?;
            Ok(u64::from_le_bytes(b8) as usize)
        };
        let (n_r, n_theta, n_phi, n_mu) = (u()?, u()?, u()?, u()?);
        let grid = GridSpec { model, r_max, n_r, n_theta, n_phi, lambda, n_mu };
        grid.validate().map_err(|e| fmt_err(format!("invalid grid: {e}")))?;
        let mut t = FourierTable::zeros(grid);
        for v in t.values.iter_mut() {
            let mut b = [0u8; 16];
            r.read_exact(&mut b)?;
            *v = C64::new(
                f64::from_le_bytes(b[..8].try_into().unwrap()),
                f64::from_le_bytes(b[8..].try_into().unwrap()),
            );
        }
        Ok(t)
    }
}
