//! Separate binary: the thread-count variable is process-wide.

use serde_json::json;

use novikov::cli::run;

#[test]
fn threads_env_is_echoed() {
  std::env::set_var("NOVIKOV_THREADS", "2");
  let o = run(["novikov", "--quiet", "betti", "--complex", "tetra"]);
  std::env::remove_var("NOVIKOV_THREADS");
  assert_eq!(o.report["threads"]["requested"], json!(2));
  assert_eq!(o.report["result"]["betti"], json!([1, 0, 1]));
}
