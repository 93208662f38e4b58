use serde::Serialize;
use serde_json::Value;

#[derive(Serialize)]
pub struct Report<'a, F: Serialize> {
    pub command: &'a str,
    pub flags: &'a F,
    pub result: Value,
}

pub fn to_json<F: Serialize>(r: &Report<'_, F>) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
    s.push('\n');
    s
}

/// One `path = value` line per leaf.
pub fn to_text<F: Serialize>(r: &Report<'_, F>) -> String {
    let v = serde_json::to_value(r).expect("reports serialize");
    let mut out = String::new();
    flatten("", &v, &mut out);
    out
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&p, x, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        _ => out.push_str(&format!("{prefix} = {v}\n")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_lines() {
        let flags = json!({"depth": 8});
        let r = Report {
            command: "homology",
            flags: &flags,
            result: json!({"rank": 1, "torsion": [], "x": [{"a": "b"}]}),
        };
        assert_eq!(
            to_text(&r),
            "command = homology\nflags.depth = 8\nresult.rank = 1\nresult.torsion = []\nresult.x[0].a = b\n"
        );
    }
}
