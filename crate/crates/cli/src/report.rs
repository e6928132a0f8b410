use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    /// Requested verdicts decide the exit code; the others are informational.
    pub requested: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub phase: String,
    pub millis: f64,
}

/// Everything a subcommand reports. Field order is the serialization order.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub verdicts: Vec<Verdict>,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<Timing>>,
    /// Plain-text form of `output`, printed outside `--json` mode.
    #[serde(skip)]
    pub output_text: Option<String>,
    #[serde(skip)]
    clock: Option<Instant>,
}

impl Report {
    pub fn new(command: &str, inputs: &[String], timings: bool) -> Self {
        Report {
            command: command.to_string(),
            inputs: inputs.to_vec(),
            verdicts: Vec::new(),
            witnesses: Vec::new(),
            output: None,
            timings: timings.then(Vec::new),
            output_text: None,
            clock: timings.then(Instant::now),
        }
    }

    pub fn require(&mut self, name: &str, holds: bool) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            holds,
            requested: true,
        });
    }

    pub fn note(&mut self, name: &str, holds: bool) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            holds,
            requested: false,
        });
    }

    pub fn witness(&mut self, w: impl Into<String>) {
        self.witnesses.push(w.into());
    }

    pub fn set_output(&mut self, json: Value, text: String) {
        self.output = Some(json);
        self.output_text = Some(text);
    }

    /// Records the time since the previous mark under `phase`.
    pub fn mark(&mut self, phase: &str) {
        if let (Some(t), Some(clock)) = (self.timings.as_mut(), self.clock.as_mut()) {
            let now = Instant::now();
            t.push(Timing {
                phase: phase.to_string(),
                millis: (now - *clock).as_secs_f64() * 1e3,
            });
            *clock = now;
        }
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().filter(|v| v.requested).all(|v| v.holds)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn print(&self, json: bool) -> std::io::Result<()> {
        let stdout = std::io::stdout();
        let mut out = stdout.lock();
        if json {
            let s = serde_json::to_string_pretty(self).expect("reports serialize");
            return writeln!(out, "{s}");
        }
        // An artifact on stdout keeps the summary on stderr so it can be piped.
        match &self.output_text {
            Some(text) => {
                out.write_all(text.as_bytes())?;
                if !text.is_empty() && !text.ends_with('\n') {
                    writeln!(out)?;
                }
                self.write_summary(&mut std::io::stderr().lock())
            }
            None => self.write_summary(&mut out),
        }
    }

    fn write_summary(&self, w: &mut impl Write) -> std::io::Result<()> {
        for v in &self.verdicts {
            let mark = if v.holds { "yes" } else { "no" };
            let tag = if v.requested { "" } else { " (info)" };
            writeln!(w, "{}: {mark}{tag}", v.name)?;
        }
        for x in &self.witnesses {
            writeln!(w, "witness: {x}")?;
        }
        if let Some(t) = &self.timings {
            for x in t {
                writeln!(w, "time {}: {:.3} ms", x.phase, x.millis)?;
            }
        }
        Ok(())
    }
}
