use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{AltTextError, Result};
use crate::host::HostFigure;

/// Source of the Python process that runs notebook cells.
pub const DRIVER_SOURCE: &str = include_str!("driver.py");

/// Environment variable naming the Python interpreter to use.
pub const PYTHON_ENV: &str = "ALTTEXTIFY_PYTHON";

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CellError {
    pub ename: String,
    pub evalue: String,
    #[serde(default)]
    pub traceback: Vec<String>,
}

/// Outcome of executing one cell.
#[derive(Debug, Clone)]
pub struct CellRun {
    pub stdout: String,
    pub stderr: String,
    pub error: Option<CellError>,
    /// Figures in creation order; `Err` holds a serialization failure.
    pub figures: Vec<std::result::Result<HostFigure, String>>,
}

/// Runs cells in order against shared state.
pub trait CellExecutor {
    fn execute(&mut self, code: &str) -> Result<CellRun>;
}

#[derive(Deserialize)]
struct Reply {
    stdout: String,
    stderr: String,
    error: Option<CellError>,
    figures: Vec<Value>,
}

/// Executes cells in a Python subprocess with matplotlib's show call
/// intercepted.
pub struct PythonExecutor {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
}

impl PythonExecutor {
    /// Starts the interpreter from `ALTTEXTIFY_PYTHON` (default `python3`)
    /// with `workdir` as its working directory.
    pub fn spawn(workdir: &Path) -> Result<PythonExecutor> {
        let python = std::env::var(PYTHON_ENV).unwrap_or_else(|_| "python3".to_string());
        let mut child = Command::new(&python)
            .arg("-u")
            .arg("-c")
            .arg(DRIVER_SOURCE)
            .current_dir(workdir)
            .env("MPLBACKEND", "Agg")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| AltTextError::Kernel(format!("cannot start {python}: {e}")))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(PythonExecutor { child, stdin, stdout })
    }
}

impl CellExecutor for PythonExecutor {
    fn execute(&mut self, code: &str) -> Result<CellRun> {
        let request = json!({"op": "exec", "code": code}).to_string();
        writeln!(self.stdin, "{request}")
            .and_then(|()| self.stdin.flush())
            .map_err(|e| AltTextError::Kernel(format!("cannot send cell: {e}")))?;
        let mut line = String::new();
        let n = self
            .stdout
            .read_line(&mut line)
            .map_err(|e| AltTextError::Kernel(format!("cannot read reply: {e}")))?;
        if n == 0 {
            let status = self.child.try_wait().ok().flatten();
            return Err(AltTextError::Kernel(format!("python process exited ({status:?})")));
        }
        let reply: Reply =
            serde_json::from_str(&line).map_err(|e| AltTextError::Kernel(format!("bad reply from driver: {e}")))?;
        let figures = reply
            .figures
            .into_iter()
            .map(|v| match v.get("serialize_error").and_then(Value::as_str) {
                Some(err) => Err(err.to_string()),
                None => HostFigure::from_value(v).map_err(|e| e.to_string()),
            })
            .collect();
        Ok(CellRun {
            stdout: reply.stdout,
            stderr: reply.stderr,
            error: reply.error,
            figures,
        })
    }
}

impl Drop for PythonExecutor {
    fn drop(&mut self) {
        let _ = writeln!(self.stdin, "{}", json!({"op": "shutdown"}));
        let _ = self.stdin.flush();
        if self.child.wait().is_err() {
            let _ = self.child.kill();
        }
    }
}
