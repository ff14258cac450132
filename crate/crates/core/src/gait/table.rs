use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{GaitError, ShaftAngles};

pub const GAIT_TABLE_HEADER: [&str; 7] = ["stamp", "FL", "FR", "ML", "MR", "HL", "HR"];

const KIND_PREFIX: &str = "# stamp_kind=";

/// What the stamp column measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum StampKind {
    /// Gait phase in [0, 1]; synthesized tables.
    #[default]
    Phase,
    /// Seconds since the start of a recording.
    Seconds,
}

impl StampKind {
    fn as_str(self) -> &'static str {
        match self {
            StampKind::Phase => "phase",
            StampKind::Seconds => "seconds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitRow {
    pub stamp: f64,
    /// Motor positions in degrees: FL, FR, ML, MR, HL, HR.
    pub positions: [f64; 6],
}

/// A replayable motion primitive: keyframed motor positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitTable {
    pub stamp_kind: StampKind,
    rows: Vec<GaitRow>,
}

impl GaitTable {
    pub fn new(stamp_kind: StampKind, rows: Vec<GaitRow>) -> Result<Self, GaitError> {
        for (i, w) in rows.windows(2).enumerate() {
            if !(w[1].stamp > w[0].stamp) {
                return Err(GaitError::NonMonotoneStamp { row: i + 2 });
            }
        }
        Ok(Self { stamp_kind, rows })
    }

    pub fn rows(&self) -> &[GaitRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Stamp span covered by the table.
    pub fn span(&self) -> Option<(f64, f64)> {
        Some((self.rows.first()?.stamp, self.rows.last()?.stamp))
    }

    /// Linear interpolation between keyframes, clamped at both ends.
    pub fn sample(&self, stamp: f64) -> Option<ShaftAngles> {
        let first = self.rows.first()?;
        let last = self.rows.last()?;
        if stamp <= first.stamp {
            return Some(ShaftAngles::from_array(first.positions));
        }
        if stamp >= last.stamp {
            return Some(ShaftAngles::from_array(last.positions));
        }
        let idx = self.rows.partition_point(|r| r.stamp <= stamp);
        let (a, b) = (&self.rows[idx - 1], &self.rows[idx]);
        let t = (stamp - a.stamp) / (b.stamp - a.stamp);
        let mut out = [0.0; 6];
        for (k, o) in out.iter_mut().enumerate() {
            *o = a.positions[k] + t * (b.positions[k] - a.positions[k]);
        }
        Some(ShaftAngles::from_array(out))
    }
}

/// Writes the table: an optional `# stamp_kind=` line, then the
/// `stamp,FL,FR,ML,MR,HL,HR` header and one row per keyframe.
pub fn write_gait_table<W: Write>(table: &GaitTable, out: W) -> Result<(), GaitError> {
    let mut out = out;
    writeln!(out, "{KIND_PREFIX}{}", table.stamp_kind.as_str())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(GAIT_TABLE_HEADER)?;
    for row in &table.rows {
        let mut rec = Vec::with_capacity(7);
        rec.push(row.stamp.to_string());
        rec.extend(row.positions.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_gait_table<R: Read>(input: R) -> Result<GaitTable, GaitError> {
    let mut input = input;
    let mut text = String::new();
    input.read_to_string(&mut text)?;

    let mut stamp_kind = StampKind::Phase;
    let mut body = text.as_str();
    let mut line_offset = 0;
    if let Some(rest) = body.strip_prefix(KIND_PREFIX) {
        let (kind, tail) = rest.split_once('\n').unwrap_or((rest, ""));
        stamp_kind = match kind.trim() {
            "phase" => StampKind::Phase,
            "seconds" => StampKind::Seconds,
            other => return Err(GaitError::Parse { row: 1, message: format!("unknown stamp kind '{other}'") }),
        };
        body = tail;
        line_offset = 1;
    }

    let mut reader =
        csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(body.as_bytes());
    let header = reader.headers().map_err(|e| GaitError::Parse { row: line_offset + 1, message: e.to_string() })?;
    if header.iter().ne(GAIT_TABLE_HEADER) {
        return Err(GaitError::Parse {
            row: line_offset + 1,
            message: format!("expected header '{}'", GAIT_TABLE_HEADER.join(",")),
        });
    }

    let mut rows: Vec<GaitRow> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        // 1-based data row number within the file, counting the header line(s)
        let row_no = line_offset + i + 2;
        let rec = rec.map_err(|e| GaitError::Parse { row: row_no, message: e.to_string() })?;
        if rec.len() != 7 {
            return Err(GaitError::Parse { row: row_no, message: format!("expected 7 columns, found {}", rec.len()) });
        }
        let mut vals = [0.0; 7];
        for (k, field) in rec.iter().enumerate() {
            vals[k] = field.parse::<f64>().map_err(|e| GaitError::Parse {
                row: row_no,
                message: format!("column {}: {e}", GAIT_TABLE_HEADER[k]),
            })?;
            if !vals[k].is_finite() {
                return Err(GaitError::Parse {
                    row: row_no,
                    message: format!("column {} is not finite", GAIT_TABLE_HEADER[k]),
                });
            }
        }
        if let Some(prev) = rows.last() {
            if !(vals[0] > prev.stamp) {
                return Err(GaitError::NonMonotoneStamp { row: row_no });
            }
        }
        rows.push(GaitRow { stamp: vals[0], positions: [vals[1], vals[2], vals[3], vals[4], vals[5], vals[6]] });
    }
    Ok(GaitTable { stamp_kind, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_table(n: usize) -> GaitTable {
        let rows = (0..n)
            .map(|i| {
                let t = i as f64 / n as f64;
                GaitRow { stamp: t, positions: std::array::from_fn(|k| (t * 7.3 + k as f64).sin() * 97.1) }
            })
            .collect();
        GaitTable::new(StampKind::Phase, rows).unwrap()
    }

    #[test]
    fn hundred_row_round_trip() {
        let table = sample_table(100);
        let mut buf = Vec::new();
        write_gait_table(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap() == "stamp,FL,FR,ML,MR,HL,HR");
        let back = read_gait_table(buf.as_slice()).unwrap();
        assert_eq!(back, table);
    }

    #[test]
    fn short_row_names_its_row() {
        let text = "stamp,FL,FR,ML,MR,HL,HR\n0,1,2,3,4,5,6\n0.5,1,2,3,4,5\n";
        match read_gait_table(text.as_bytes()) {
            Err(GaitError::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn decreasing_stamp_is_rejected() {
        let text = "stamp,FL,FR,ML,MR,HL,HR\n0.5,1,2,3,4,5,6\n0.25,1,2,3,4,5,6\n";
        assert!(matches!(read_gait_table(text.as_bytes()), Err(GaitError::NonMonotoneStamp { row: 3 })));
        let rows = vec![GaitRow { stamp: 1.0, positions: [0.0; 6] }, GaitRow { stamp: 1.0, positions: [0.0; 6] }];
        assert!(GaitTable::new(StampKind::Seconds, rows).is_err());
    }

    #[test]
    fn header_without_kind_line_defaults_to_phase() {
        let text = "stamp,FL,FR,ML,MR,HL,HR\n0,1,2,3,4,5,6\n";
        let t = read_gait_table(text.as_bytes()).unwrap();
        assert_eq!(t.stamp_kind, StampKind::Phase);
        assert_eq!(t.len(), 1);
        let bad = "stamp,FL,FR,ML,MR,HL\n0,1,2,3,4,5\n";
        assert!(matches!(read_gait_table(bad.as_bytes()), Err(GaitError::Parse { row: 1, .. })));
    }

    #[test]
    fn sampling_interpolates_and_clamps() {
        let rows = vec![GaitRow { stamp: 0.0, positions: [0.0; 6] }, GaitRow { stamp: 1.0, positions: [10.0; 6] }];
        let t = GaitTable::new(StampKind::Seconds, rows).unwrap();
        assert_eq!(t.sample(0.25).unwrap().fl, 2.5);
        assert_eq!(t.sample(-1.0).unwrap().hr, 0.0);
        assert_eq!(t.sample(3.0).unwrap().mr, 10.0);
    }

    proptest! {
        #[test]
        fn round_trip_is_lossless(
            vals in proptest::collection::vec(proptest::array::uniform6(-1e6f64..1e6), 1..40),
            seconds in any::<bool>(),
        ) {
            let rows = vals.iter().enumerate()
                .map(|(i, p)| GaitRow { stamp: i as f64 * 0.137 + 1e-3, positions: *p })
                .collect();
            let kind = if seconds { StampKind::Seconds } else { StampKind::Phase };
            let table = GaitTable::new(kind, rows).unwrap();
            let mut buf = Vec::new();
            write_gait_table(&table, &mut buf).unwrap();
            prop_assert_eq!(read_gait_table(buf.as_slice()).unwrap(), table);
        }
    }
}
