//! Obstacle-choice advisors: the language-model client and its stand-ins.
//!
//! An advisor, asked once per search node, names up to `k` obstacles worth
//! relocating. Its reply is classified into three bins that the planner
//! tallies separately:
//!
//! - **ok** — at least one obstacle token parsed and every named obstacle is
//!   currently manipulable; the recommendation feeds the biased sampler.
//! - **content error** — the reply parsed but names something the robot
//!   cannot reach (or that does not exist); the recommendation is dropped.
//! - **format error** — nothing parseable came back: garbled text, transport
//!   failure, or timeout. Also dropped.
//!
//! A dropped recommendation never aborts a run; the planner simply falls
//! back to unbiased obstacle sampling for nodes whose query failed.
//!
//! The language-model client reads its bearer token from the
//! `NAMO_LLM_API_KEY` environment variable; the key never appears in code,
//! configuration files, or logs.

use crate::geometry::Point;
use crate::world::{ObstacleId, World, WorldState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::time::Duration;

/// Default prompt template: a role section and a query section separated by
/// a `---` line, with `{robot}`, `{goal}`, `{obstacles}`, `{manipulable}`,
/// and `{k}` slots.
pub const DEFAULT_TEMPLATE: &str = include_str!("prompts/advisor.txt");

/// Environment variable holding the language-model bearer token.
pub const API_KEY_ENV: &str = "NAMO_LLM_API_KEY";

/// How a reply was judged. See the module docs for the bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Ok,
    FormatError,
    ContentError,
}

/// One advisor reply: the obstacles it named (at most `k`, in reply order),
/// the raw text it produced, and the judgment.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvisorResponse {
    pub candidates: Vec<ObstacleId>,
    pub raw: String,
    pub classification: Classification,
}

impl AdvisorResponse {
    /// A transport or parse failure carrying its diagnostic text.
    pub fn format_error(raw: String) -> Self {
        AdvisorResponse {
            candidates: Vec::new(),
            raw,
            classification: Classification::FormatError,
        }
    }
}

/// Everything an advisor may look at, summarized from one search node.
#[derive(Debug, Clone, PartialEq)]
pub struct PromptContext {
    pub robot: Point,
    pub goal_centroid: Point,
    pub obstacles: Vec<ObstacleSummary>,
    /// Ids the robot can currently reach, ascending.
    pub manipulable: Vec<ObstacleId>,
    /// How many candidates to request.
    pub k: usize,
}

/// One obstacle as the advisor sees it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObstacleSummary {
    pub id: ObstacleId,
    pub centroid: Point,
    pub movable: bool,
    pub manipulable: bool,
}

impl PromptContext {
    /// Summarizes a world state. Obstacles absorbed into storage are
    /// omitted; everything else is listed with its current centroid.
    pub fn from_state(world: &World, state: &WorldState, k: usize) -> Self {
        let scene = world.scene();
        let manipulable = world.manipulable_set(state);
        let obstacles = scene
            .obstacles
            .iter()
            .enumerate()
            .filter(|&(i, _)| !state.config.is_removed(i))
            .map(|(i, o)| ObstacleSummary {
                id: o.id,
                centroid: o.polygon.transformed(state.config.pose(i)).centroid(),
                movable: o.movable,
                manipulable: manipulable.contains(o.id),
            })
            .collect();
        PromptContext {
            robot: scene.robot_start(),
            goal_centroid: scene.goal.polygon.centroid(),
            obstacles,
            manipulable: manipulable.ids().to_vec(),
            k,
        }
    }
}

/// Renders `template` against `ctx` into a (role, query) message pair. The
/// template is split at the first `---` line; both halves get their slots
/// filled. Rendering is pure, so one context always yields one prompt.
pub fn build_prompt(template: &str, ctx: &PromptContext) -> (String, String) {
    let (system, user) = match template.split_once("\n---\n") {
        Some((s, u)) => (s, u),
        None => ("", template),
    };
    (fill_slots(system, ctx), fill_slots(user, ctx))
}

fn fill_slots(text: &str, ctx: &PromptContext) -> String {
    let obstacles = ctx
        .obstacles
        .iter()
        .map(|o| {
            let status = match (o.movable, o.manipulable) {
                (false, _) => "immovable",
                (true, true) => "movable, within reach",
                (true, false) => "movable, out of reach",
            };
            format!(
                "  - obs{} at ({:.2}, {:.2}), {}",
                o.id, o.centroid.x, o.centroid.y, status
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    let manipulable = if ctx.manipulable.is_empty() {
        "none".to_string()
    } else {
        ctx.manipulable
            .iter()
            .map(|id| format!("obs{id}"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    text.replace("{robot}", &format!("({:.2}, {:.2})", ctx.robot.x, ctx.robot.y))
        .replace(
            "{goal}",
            &format!("({:.2}, {:.2})", ctx.goal_centroid.x, ctx.goal_centroid.y),
        )
        .replace("{obstacles}", &obstacles)
        .replace("{manipulable}", &manipulable)
        .replace("{k}", &ctx.k.to_string())
}

/// Extracts every `obs<number>` token (case-insensitive, anywhere in the
/// text), deduplicated in order of first appearance.
pub fn parse_obstacle_tokens(text: &str) -> Vec<ObstacleId> {
    let bytes = text.as_bytes();
    let mut ids = Vec::new();
    let mut i = 0;
    while i + 3 <= bytes.len() {
        if bytes[i..].len() >= 3 && bytes[i..i + 3].eq_ignore_ascii_case(b"obs") {
            let mut j = i + 3;
            let mut value: u64 = 0;
            let mut digits = 0;
            while j < bytes.len() && bytes[j].is_ascii_digit() && digits < 9 {
                value = value * 10 + (bytes[j] - b'0') as u64;
                j += 1;
                digits += 1;
            }
            if digits > 0 {
                let id = value as ObstacleId;
                if !ids.contains(&id) {
                    ids.push(id);
                }
                i = j;
                continue;
            }
        }
        i += 1;
    }
    ids
}

/// Builds a classified response from raw reply text: parse tokens, keep the
/// first `k`, and judge them against the manipulable set.
pub fn respond_from_text(raw: String, ctx: &PromptContext) -> AdvisorResponse {
    let mut candidates = parse_obstacle_tokens(&raw);
    candidates.truncate(ctx.k);
    let classification = if candidates.is_empty() {
        Classification::FormatError
    } else if candidates
        .iter()
        .all(|id| ctx.manipulable.binary_search(id).is_ok())
    {
        Classification::Ok
    } else {
        Classification::ContentError
    };
    AdvisorResponse {
        candidates,
        raw,
        classification,
    }
}

/// Picks the obstacle to bias toward from a classified response: `None`
/// unless the response is ok, a uniform draw among the candidates when
/// there are several. Consumes randomness only in that last case.
pub fn select_recommended(
    response: &AdvisorResponse,
    rng: &mut ChaCha8Rng,
) -> Option<ObstacleId> {
    if response.classification != Classification::Ok {
        return None;
    }
    match response.candidates.len() {
        0 => None,
        1 => Some(response.candidates[0]),
        n => Some(response.candidates[rng.gen_range(0..n)]),
    }
}

/// An obstacle-choice oracle the planner can query once per search node.
pub trait Advisor {
    fn query(&mut self, ctx: &PromptContext) -> AdvisorResponse;

    /// False for the no-op advisor, letting the planner skip queries
    /// entirely instead of collecting dummy failures.
    fn wants_queries(&self) -> bool {
        true
    }
}

/// Advisor that never recommends anything; the planner runs purely random.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoAdvisor;

impl Advisor for NoAdvisor {
    fn query(&mut self, _ctx: &PromptContext) -> AdvisorResponse {
        AdvisorResponse::format_error("no advisor configured".to_string())
    }

    fn wants_queries(&self) -> bool {
        false
    }
}

/// Heuristic stand-in for the language model: recommends the manipulable
/// obstacle whose centroid sits nearest the goal centroid, lowest id on
/// ties. Cheap, deterministic, and surprisingly serviceable on scenes where
/// the blocker hugs the goal corridor.
#[derive(Debug, Default, Clone, Copy)]
pub struct NearestGoalAdvisor;

impl Advisor for NearestGoalAdvisor {
    fn query(&mut self, ctx: &PromptContext) -> AdvisorResponse {
        let mut best: Option<(f64, ObstacleId)> = None;
        for o in &ctx.obstacles {
            if !o.manipulable {
                continue;
            }
            let d = o.centroid.distance(ctx.goal_centroid);
            let better = match best {
                None => true,
                Some((bd, bid)) => d < bd || (d == bd && o.id < bid),
            };
            if better {
                best = Some((d, o.id));
            }
        }
        match best {
            Some((_, id)) => respond_from_text(format!("obs{id}"), ctx),
            None => AdvisorResponse::format_error("nothing manipulable".to_string()),
        }
    }
}

/// Advisor that replays a fixed script of recommendations, cycling when the
/// script runs out. Each query consumes one entry, truncated to the `k` the
/// context asks for — so a script of `[[9, 4]]` under `k = 1` recommends
/// only `obs9`, under `k = 2` both.
#[derive(Debug, Clone)]
pub struct ScriptedAdvisor {
    responses: Vec<Vec<ObstacleId>>,
    cursor: usize,
}

impl ScriptedAdvisor {
    pub fn new(responses: Vec<Vec<ObstacleId>>) -> Self {
        assert!(!responses.is_empty(), "script must hold at least one entry");
        ScriptedAdvisor {
            responses,
            cursor: 0,
        }
    }

    /// Script of single-obstacle answers.
    pub fn from_ids(ids: &[ObstacleId]) -> Self {
        Self::new(ids.iter().map(|&id| vec![id]).collect())
    }
}

impl Advisor for ScriptedAdvisor {
    fn query(&mut self, ctx: &PromptContext) -> AdvisorResponse {
        let entry = &self.responses[self.cursor % self.responses.len()];
        self.cursor += 1;
        let raw = entry
            .iter()
            .map(|id| format!("obs{id}"))
            .collect::<Vec<_>>()
            .join(", ");
        respond_from_text(raw, ctx)
    }
}

/// Blocking client for an OpenAI-style chat-completion endpoint.
pub struct LlmAdvisor {
    endpoint: String,
    model: String,
    api_key: Option<String>,
    template: String,
    temperature: f64,
    timeout: Duration,
    client: reqwest::blocking::Client,
}

impl LlmAdvisor {
    /// Client for `endpoint` (the full completion URL) and `model`, reading
    /// the bearer token from [`API_KEY_ENV`].
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        let timeout = Duration::from_secs(30);
        LlmAdvisor {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key: std::env::var(API_KEY_ENV).ok(),
            template: DEFAULT_TEMPLATE.to_string(),
            temperature: 0.0,
            timeout,
            client: Self::client(timeout),
        }
    }

    fn client(timeout: Duration) -> reqwest::blocking::Client {
        reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .expect("client construction cannot fail with static options")
    }

    /// Replaces the prompt template (e.g. loaded from a file).
    pub fn with_template(mut self, template: impl Into<String>) -> Self {
        self.template = template.into();
        self
    }

    /// Overrides the bearer token (tests; normal runs use the environment).
    pub fn with_api_key(mut self, key: Option<String>) -> Self {
        self.api_key = key;
        self
    }

    /// Overrides the request timeout (tests; normal runs wait 30 s).
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self.client = Self::client(timeout);
        self
    }

    fn request_once(&self, system: &str, user: &str) -> Result<String, String> {
        let body = serde_json::json!({
            "model": self.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "temperature": self.temperature,
        });
        let mut req = self.client.post(&self.endpoint).json(&body);
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let response = req.send().map_err(|e| format!("transport: {e}"))?;
        let status = response.status();
        if !status.is_success() {
            return Err(format!("http status {status}"));
        }
        let value: serde_json::Value = response
            .json()
            .map_err(|e| format!("body decode: {e}"))?;
        value["choices"][0]["message"]["content"]
            .as_str()
            .map(str::to_string)
            .ok_or_else(|| "missing choices[0].message.content".to_string())
    }
}

impl Advisor for LlmAdvisor {
    /// One query with a single retry: a failed attempt (transport error,
    /// bad status, undecodable body) is repeated once, and a second failure
    /// becomes a format error rather than aborting the run.
    fn query(&mut self, ctx: &PromptContext) -> AdvisorResponse {
        let (system, user) = build_prompt(&self.template, ctx);
        match self
            .request_once(&system, &user)
            .or_else(|_| self.request_once(&system, &user))
        {
            Ok(text) => respond_from_text(text, ctx),
            Err(e) => AdvisorResponse::format_error(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use std::io::{Read, Write};
    use std::net::TcpListener;
    use std::thread;

    fn ctx() -> PromptContext {
        PromptContext {
            robot: Point::new(0.5, 0.5),
            goal_centroid: Point::new(9.4, 1.5),
            obstacles: vec![
                ObstacleSummary {
                    id: 1,
                    centroid: Point::new(5.0, 0.2),
                    movable: false,
                    manipulable: false,
                },
                ObstacleSummary {
                    id: 3,
                    centroid: Point::new(2.0, 1.5),
                    movable: true,
                    manipulable: true,
                },
                ObstacleSummary {
                    id: 7,
                    centroid: Point::new(8.0, 1.0),
                    movable: true,
                    manipulable: true,
                },
            ],
            manipulable: vec![3, 7],
            k: 2,
        }
    }

    #[test]
    fn prompt_renders_every_slot_deterministically() {
        let (system, user) = build_prompt(DEFAULT_TEMPLATE, &ctx());
        assert!(system.contains("Give 2 candidate"));
        assert!(user.contains("robot at (0.50, 0.50)"));
        assert!(user.contains("goal region centered at (9.40, 1.50)"));
        assert!(user.contains("  - obs1 at (5.00, 0.20), immovable"));
        assert!(user.contains("  - obs3 at (2.00, 1.50), movable, within reach"));
        assert!(user.contains("grasp: obs3, obs7"));
        assert!(!user.contains('{'), "unfilled slot left in:\n{user}");
        assert_eq!(build_prompt(DEFAULT_TEMPLATE, &ctx()), (system, user));
    }

    #[test]
    fn token_parsing_finds_ids_anywhere_and_dedups() {
        assert_eq!(
            parse_obstacle_tokens("I'd move OBS7 first, then obs3. obs7 again."),
            vec![7, 3]
        );
        assert_eq!(parse_obstacle_tokens("Obs12,obs005"), vec![12, 5]);
        assert_eq!(
            parse_obstacle_tokens("observe the obstacle"),
            Vec::<ObstacleId>::new()
        );
        assert_eq!(parse_obstacle_tokens(""), Vec::<ObstacleId>::new());
        assert_eq!(parse_obstacle_tokens("obs"), Vec::<ObstacleId>::new());
    }

    #[test]
    fn responses_are_classified_into_the_three_bins() {
        let ctx = ctx();
        let ok = respond_from_text("move obs3 then obs7".into(), &ctx);
        assert_eq!(ok.classification, Classification::Ok);
        assert_eq!(ok.candidates, vec![3, 7]);

        let truncated = respond_from_text("obs7 obs3 obs1".into(), &ctx);
        assert_eq!(truncated.candidates, vec![7, 3]); // first k = 2 only
        assert_eq!(truncated.classification, Classification::Ok);

        let content = respond_from_text("definitely obs1".into(), &ctx);
        assert_eq!(content.classification, Classification::ContentError);
        assert_eq!(content.candidates, vec![1]);

        let missing = respond_from_text("try obs99".into(), &ctx);
        assert_eq!(missing.classification, Classification::ContentError);

        let garbled = respond_from_text("I cannot help with that".into(), &ctx);
        assert_eq!(garbled.classification, Classification::FormatError);
        assert!(garbled.candidates.is_empty());
    }

    #[test]
    fn selection_is_uniform_over_ok_candidates_and_silent_otherwise() {
        let ctx = ctx();
        let ok = respond_from_text("obs3 obs7".into(), &ctx);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 40_000;
        let mut picked3 = 0;
        for _ in 0..n {
            match select_recommended(&ok, &mut rng) {
                Some(3) => picked3 += 1,
                Some(7) => {}
                other => panic!("unexpected pick {other:?}"),
            }
        }
        let f = picked3 as f64 / n as f64;
        assert!((f - 0.5).abs() < 0.01, "obs3 frequency {f}");

        // A single candidate is returned without touching the stream.
        let single = respond_from_text("obs3".into(), &ctx);
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(select_recommended(&single, &mut a), Some(3));
        assert_eq!(a.gen::<u64>(), b.gen::<u64>());

        // Errors yield nothing and also leave the stream alone.
        let bad = respond_from_text("no idea".into(), &ctx);
        assert_eq!(select_recommended(&bad, &mut a), None);
    }

    #[test]
    fn nearest_goal_advisor_prefers_the_goalward_obstacle() {
        let mut advisor = NearestGoalAdvisor;
        let response = advisor.query(&ctx());
        assert_eq!(response.candidates, vec![7]); // obs7 sits nearest the goal
        assert_eq!(response.classification, Classification::Ok);

        let mut empty = ctx();
        empty.manipulable.clear();
        for o in &mut empty.obstacles {
            o.manipulable = false;
        }
        assert_eq!(
            advisor.query(&empty).classification,
            Classification::FormatError
        );
    }

    #[test]
    fn scripted_advisor_cycles_and_truncates() {
        let mut advisor = ScriptedAdvisor::new(vec![vec![3, 7], vec![7]]);
        let mut narrow = ctx();
        narrow.k = 1;
        let first = advisor.query(&narrow);
        assert_eq!(first.candidates, vec![3]); // truncated to k = 1
        let second = advisor.query(&narrow);
        assert_eq!(second.candidates, vec![7]);
        let third = advisor.query(&narrow); // wraps around
        assert_eq!(third.candidates, vec![3]);

        let mut singles = ScriptedAdvisor::from_ids(&[7, 3]);
        assert_eq!(advisor_k2(&mut singles).candidates, vec![7]);
        assert_eq!(advisor_k2(&mut singles).candidates, vec![3]);
    }

    fn advisor_k2(a: &mut ScriptedAdvisor) -> AdvisorResponse {
        a.query(&ctx())
    }

    /// Minimal single-request HTTP double: accepts one connection, reads
    /// one request, sends `response`, records what it saw.
    fn http_double(
        responses: Vec<Option<String>>,
    ) -> (String, thread::JoinHandle<Vec<String>>) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let handle = thread::spawn(move || {
            let mut seen = Vec::new();
            for response in responses {
                let (mut stream, _) = listener.accept().unwrap();
                let mut buf = Vec::new();
                let mut chunk = [0u8; 4096];
                // Read headers, then the declared body length.
                let body_len = loop {
                    let n = stream.read(&mut chunk).unwrap();
                    buf.extend_from_slice(&chunk[..n]);
                    if let Some(pos) = find_header_end(&buf) {
                        let header = String::from_utf8_lossy(&buf[..pos]).to_string();
                        let len = header
                            .lines()
                            .find_map(|l| {
                                let (name, value) = l.split_once(':')?;
                                name.eq_ignore_ascii_case("content-length")
                                    .then(|| value.trim().parse::<usize>().ok())?
                            })
                            .unwrap_or(0);
                        break (pos + 4, len, header);
                    }
                };
                let (body_start, len, header) = body_len;
                while buf.len() < body_start + len {
                    let n = stream.read(&mut chunk).unwrap();
                    buf.extend_from_slice(&chunk[..n]);
                }
                let body = String::from_utf8_lossy(&buf[body_start..body_start + len]);
                seen.push(format!("{header}\n\n{body}"));
                match response {
                    Some(json) => {
                        let reply = format!(
                            "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{}",
                            json.len(),
                            json
                        );
                        stream.write_all(reply.as_bytes()).unwrap();
                    }
                    None => drop(stream), // slam the connection shut
                }
            }
            seen
        });
        (url, handle)
    }

    fn find_header_end(buf: &[u8]) -> Option<usize> {
        buf.windows(4).position(|w| w == b"\r\n\r\n")
    }

    fn chat_body(content: &str) -> String {
        serde_json::json!({
            "choices": [{"message": {"role": "assistant", "content": content}}]
        })
        .to_string()
    }

    #[test]
    fn llm_client_round_trips_a_recommendation() {
        let (url, server) = http_double(vec![Some(chat_body("obs7 then obs3"))]);
        let mut advisor = LlmAdvisor::new(url, "test-model")
            .with_api_key(Some("sk-test-123".to_string()));
        let response = advisor.query(&ctx());
        assert_eq!(response.classification, Classification::Ok);
        assert_eq!(response.candidates, vec![7, 3]);
        let seen = server.join().unwrap();
        assert_eq!(seen.len(), 1);
        assert!(seen[0].contains("authorization: Bearer sk-test-123")
            || seen[0].contains("Authorization: Bearer sk-test-123"));
        assert!(seen[0].contains("\"model\":\"test-model\""));
        assert!(seen[0].contains("robot at (0.50, 0.50)"));
    }

    #[test]
    fn llm_client_retries_once_after_a_dropped_connection() {
        let (url, server) = http_double(vec![None, Some(chat_body("obs3"))]);
        let mut advisor = LlmAdvisor::new(url, "test-model").with_api_key(None);
        let response = advisor.query(&ctx());
        assert_eq!(response.classification, Classification::Ok);
        assert_eq!(response.candidates, vec![3]);
        assert_eq!(server.join().unwrap().len(), 2);
    }

    #[test]
    fn llm_client_turns_persistent_failure_into_a_format_error() {
        let (url, server) = http_double(vec![None, None]);
        let mut advisor = LlmAdvisor::new(url, "test-model").with_api_key(None);
        let response = advisor.query(&ctx());
        assert_eq!(response.classification, Classification::FormatError);
        assert!(response.candidates.is_empty());
        assert_eq!(server.join().unwrap().len(), 2);
    }

    #[test]
    fn llm_client_flags_undecodable_and_unparseable_bodies() {
        let (url, server) = http_double(vec![
            Some("this is not json".to_string()),
            Some("still not json".to_string()),
        ]);
        let mut advisor = LlmAdvisor::new(url, "test-model").with_api_key(None);
        let response = advisor.query(&ctx());
        assert_eq!(response.classification, Classification::FormatError);
        server.join().unwrap();

        let (url, server) = http_double(vec![Some(chat_body("no obstacle names here"))]);
        let mut advisor = LlmAdvisor::new(url, "test-model").with_api_key(None);
        let response = advisor.query(&ctx());
        assert_eq!(response.classification, Classification::FormatError);
        server.join().unwrap();
    }

    #[test]
    fn llm_client_times_out_and_reports_a_format_error() {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat/completions", listener.local_addr().unwrap());
        let server = thread::spawn(move || {
            // Accept both attempts but never answer within the timeout.
            for _ in 0..2 {
                let (stream, _) = listener.accept().unwrap();
                thread::sleep(Duration::from_millis(400));
                drop(stream);
            }
        });
        let mut advisor = LlmAdvisor::new(url, "test-model")
            .with_api_key(None)
            .with_timeout(Duration::from_millis(100));
        let response = advisor.query(&ctx());
        assert_eq!(response.classification, Classification::FormatError);
        assert!(response.raw.contains("transport"));
        server.join().unwrap();
    }
}
