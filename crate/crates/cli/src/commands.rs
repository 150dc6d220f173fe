use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use wstrata::strata::{classify_all, classify_id};
use wstrata::weyl::format_word;
use wstrata::{
    adm_elements, eo_kr_match, es_from_final, run_suite, AdmSet, ExtElement, GroupContext, IndexSet, ParahoricType,
    StratumReport, Suite, SuiteReport, SuperspecialLabels,
};

use crate::parse::{parse_j, parse_word};
use crate::{cache, Cli, CliError, Command, Format};

type Outcome = Result<(i32, String), CliError>;

pub(crate) fn dispatch(cli: &Cli, cache_dir: Option<&Path>, diagnostics: &mut Vec<String>) -> Outcome {
    let fmt = cli.format;
    let adm_for = |ctx: &GroupContext, diagnostics: &mut Vec<String>| cache::obtain(ctx, cache_dir, diagnostics);
    match &cli.command {
        Command::Info { g } => info(&GroupContext::new(*g)?, fmt),
        Command::Adm { g, count, .. } => adm(&GroupContext::new(*g)?, *count, fmt),
        Command::AdmJ { g, j } => {
            let ctx = GroupContext::new(*g)?;
            let j = parse_j(*g, j)?;
            adm_j(&adm_for(&ctx, diagnostics)?, j, fmt)
        }
        Command::Classify { g, j, x } => {
            let ctx = GroupContext::new(*g)?;
            let j = parse_j(*g, j)?;
            let x = x.as_ref().map(|toks| parse_word(&ctx, &toks.join(" "))).transpose()?;
            classify(&adm_for(&ctx, diagnostics)?, j, x, fmt)
        }
        Command::Eo { g } => {
            let ctx = GroupContext::new(*g)?;
            eo(&adm_for(&ctx, diagnostics)?, fmt)
        }
        Command::Verify { g, suite } => {
            let ctx = GroupContext::new(*g)?;
            let suite: Suite = suite.parse().map_err(|_| CliError::Usage(format!("unknown suite '{suite}'")))?;
            let adm = if suite.needs_adm() { Some(adm_for(&ctx, diagnostics)?) } else { None };
            verify(run_suite(suite, &ctx, adm.as_ref())?, fmt)
        }
        Command::Hasse { g, output } => {
            let ctx = GroupContext::new(*g)?;
            hasse(&adm_for(&ctx, diagnostics)?, output.as_deref())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("payloads serialize");
    s.push('\n');
    s
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
}

fn nodes(set: IndexSet) -> Vec<usize> {
    set.iter().collect()
}

fn seq(values: &[u32]) -> String {
    let parts: Vec<String> = values.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Serialize)]
struct FinalRow {
    word: String,
    window: Vec<i32>,
    psi: Vec<u32>,
    length: u32,
}

#[derive(Serialize)]
struct InfoPayload {
    command: &'static str,
    g: usize,
    generator_count: usize,
    diagram: String,
    finite_group_order: u64,
    tau_word: String,
    tau_window: Vec<i32>,
    tau_translation: Vec<i32>,
    t_mu_word: String,
    t_mu_length: u32,
    frobenius: Vec<usize>,
    final_count: usize,
    final_elements: Vec<FinalRow>,
}

fn diagram(g: usize) -> String {
    if g == 1 {
        return "0 =inf= 1".into();
    }
    let mut s = "0".to_string();
    for i in 1..=g {
        let bond = if i == 1 || i == g { " =4= " } else { " - " };
        write!(s, "{bond}{i}").unwrap();
    }
    s
}

fn info(ctx: &GroupContext, fmt: Format) -> Outcome {
    let g = ctx.rank();
    let finals: Vec<FinalRow> = ctx
        .final_elements()
        .iter()
        .map(|w| FinalRow {
            word: format_word(&w.reduced_word()),
            window: w.window_i32(),
            psi: es_from_final(ctx, w).expect("final").values().to_vec(),
            length: w.length(),
        })
        .collect();
    if fmt == Format::Csv {
        let rows = finals.iter().map(|f| vec![f.word.clone(), seq(&f.psi), f.length.to_string()]);
        return Ok((0, csv_table(&["word", "psi", "length"], rows)?));
    }
    let tau = ctx.tau();
    let payload = InfoPayload {
        command: "info",
        g,
        generator_count: g + 1,
        diagram: diagram(g),
        finite_group_order: (1u64 << g) * (1..=g as u64).product::<u64>(),
        tau_word: ctx.reduced_word(tau).to_string(),
        tau_window: tau.finite_part().window_i32(),
        tau_translation: tau.translation_part().coords().to_vec(),
        t_mu_word: ctx.reduced_word(&ctx.t_mu()).to_string(),
        t_mu_length: ctx.t_mu().length(),
        frobenius: (0..=g).map(|i| ctx.frobenius(i)).collect(),
        final_count: finals.len(),
        final_elements: finals,
    };
    Ok((0, json(&payload)))
}

#[derive(Serialize)]
struct AdmRow {
    id: usize,
    omega: i32,
    word: String,
    w_tau: String,
    length: u32,
}

#[derive(Serialize)]
struct AdmPayload {
    command: &'static str,
    g: usize,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<AdmRow>>,
}

fn adm(ctx: &GroupContext, count_only: bool, fmt: Format) -> Outcome {
    let g = ctx.rank();
    let mut elements: Vec<(u32, wstrata::ReducedWord, ExtElement)> = adm_elements(ctx)?
        .into_iter()
        .map(|x| (x.length(), ctx.reduced_word(&x), x))
        .collect();
    let count = elements.len();
    if count_only {
        return Ok(match fmt {
            Format::Json => (0, json(&AdmPayload { command: "adm", g, count, elements: None })),
            Format::Csv => (0, csv_table(&["g", "count"], [vec![g.to_string(), count.to_string()]])?),
        });
    }
    elements.sort_by(|a, b| (a.0, &a.1.letters).cmp(&(b.0, &b.1.letters)));
    let rows: Vec<AdmRow> = elements
        .iter()
        .enumerate()
        .map(|(id, (l, w, x))| AdmRow { id, omega: x.omega(), word: w.to_string(), w_tau: ctx.w_tau_string(x), length: *l })
        .collect();
    match fmt {
        Format::Json => Ok((0, json(&AdmPayload { command: "adm", g, count, elements: Some(rows) }))),
        Format::Csv => {
            let rows = rows
                .into_iter()
                .map(|r| vec![r.id.to_string(), r.omega.to_string(), r.word, r.w_tau, r.length.to_string()]);
            Ok((0, csv_table(&["id", "omega", "word", "w_tau", "length"], rows)?))
        }
    }
}

#[derive(Serialize)]
struct BlockRow {
    xbar: usize,
    xbar_word: String,
    size: usize,
    length_min: u32,
    length_max: u32,
    members: Vec<String>,
}

#[derive(Serialize)]
struct AdmJPayload {
    command: &'static str,
    g: usize,
    j: Vec<usize>,
    block_count: usize,
    blocks: Vec<BlockRow>,
}

fn adm_j(adm: &AdmSet, j: ParahoricType, fmt: Format) -> Outcome {
    let blocks: Vec<BlockRow> = adm
        .adm_j(j)
        .into_iter()
        .map(|b| {
            let lens = b.members.iter().map(|&m| adm.length(m));
            BlockRow {
                xbar: b.min_rep,
                xbar_word: adm.word(b.min_rep).to_string(),
                size: b.members.len(),
                length_min: lens.clone().min().unwrap_or(0),
                length_max: lens.max().unwrap_or(0),
                members: b.members.iter().map(|&m| adm.word(m).to_string()).collect(),
            }
        })
        .collect();
    match fmt {
        Format::Json => {
            let p = AdmJPayload { command: "adm-j", g: adm.rank(), j: nodes(j.nodes()), block_count: blocks.len(), blocks };
            Ok((0, json(&p)))
        }
        Format::Csv => {
            let rows = blocks.into_iter().map(|b| {
                vec![
                    b.xbar.to_string(),
                    b.xbar_word,
                    b.size.to_string(),
                    b.length_min.to_string(),
                    b.length_max.to_string(),
                    b.members.join(";"),
                ]
            });
            Ok((0, csv_table(&["xbar", "xbar_word", "size", "length_min", "length_max", "members"], rows)?))
        }
    }
}

#[derive(Serialize)]
struct StratumRow {
    xbar: usize,
    xbar_word: String,
    xbar_w_tau: String,
    members: Vec<String>,
    c_superspecial: Vec<usize>,
    supersingular: bool,
    length_min: u32,
    length_max: u32,
}

#[derive(Serialize)]
struct ClassifyPayload {
    command: &'static str,
    g: usize,
    j: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<String>,
    supersingular_count: usize,
    strata: Vec<StratumRow>,
}

fn stratum_row(adm: &AdmSet, r: &StratumReport) -> StratumRow {
    StratumRow {
        xbar: r.xbar,
        xbar_word: adm.word(r.xbar).to_string(),
        xbar_w_tau: adm.context().w_tau_string(adm.element(r.xbar)),
        members: r.members.iter().map(|&m| adm.word(m).to_string()).collect(),
        c_superspecial: nodes(r.c_superspecial),
        supersingular: r.supersingular,
        length_min: r.length_range.0,
        length_max: r.length_range.1,
    }
}

fn classify(adm: &AdmSet, j: ParahoricType, x: Option<ExtElement>, fmt: Format) -> Outcome {
    let ctx = adm.context();
    let labels = SuperspecialLabels::compute(adm);
    let reports: Vec<StratumReport> = match &x {
        Some(x) => {
            let id = adm
                .id_of(x)
                .ok_or_else(|| CliError::Usage(format!("{} is not admissible", ctx.reduced_word(x))))?;
            vec![classify_id(adm, &labels, j, id)]
        }
        None => classify_all(adm, &labels, j),
    };
    // supersingular strata must be superspecial for a single c
    let broken: Vec<String> = reports
        .iter()
        .filter(|r| r.supersingular != !r.c_superspecial.is_empty())
        .map(|r| adm.word(r.xbar).to_string())
        .collect();
    let rows: Vec<StratumRow> = reports.iter().map(|r| stratum_row(adm, r)).collect();
    let payload = match fmt {
        Format::Json => json(&ClassifyPayload {
            command: "classify",
            g: adm.rank(),
            j: nodes(j.nodes()),
            x: x.map(|x| ctx.reduced_word(&x).to_string()),
            supersingular_count: rows.iter().filter(|r| r.supersingular).count(),
            strata: rows,
        }),
        Format::Csv => {
            let rows = rows.into_iter().map(|r| {
                let cs: Vec<String> = r.c_superspecial.iter().map(usize::to_string).collect();
                vec![
                    r.xbar.to_string(),
                    r.xbar_word,
                    r.members.len().to_string(),
                    cs.join(";"),
                    r.supersingular.to_string(),
                    r.length_min.to_string(),
                    r.length_max.to_string(),
                    r.members.join(";"),
                ]
            });
            let header =
                ["xbar", "xbar_word", "size", "c_superspecial", "supersingular", "length_min", "length_max", "members"];
            csv_table(&header, rows)?
        }
    };
    if broken.is_empty() {
        Ok((0, payload))
    } else {
        Err(CliError::Falsified(format!("supersingular but not superspecial: {}", broken.join(", "))))
    }
}

#[derive(Serialize)]
struct EoRow {
    w: String,
    window: Vec<i32>,
    psi: Vec<u32>,
    length: u32,
    j: Vec<usize>,
    w_tau: String,
    block_size: usize,
    block: Vec<String>,
    unique_min: bool,
    all_above: bool,
}

#[derive(Serialize)]
struct EoPayload {
    command: &'static str,
    g: usize,
    rows: Vec<EoRow>,
}

fn eo(adm: &AdmSet, fmt: Format) -> Outcome {
    let ctx = adm.context();
    let mut rows = Vec::new();
    for w in ctx.final_elements() {
        let m = eo_kr_match(adm, &w)?;
        rows.push(EoRow {
            w: format_word(&m.word),
            window: w.window_i32(),
            psi: m.psi.values().to_vec(),
            length: w.length(),
            j: nodes(m.j.nodes()),
            w_tau: adm.word(m.w_tau).to_string(),
            block_size: m.block.len(),
            block: m.block.iter().map(|&v| adm.word(v).to_string()).collect(),
            unique_min: m.unique_min,
            all_above: m.all_above,
        });
    }
    let failed = rows.iter().any(|r| !(r.unique_min && r.all_above));
    let payload = match fmt {
        Format::Json => json(&EoPayload { command: "eo", g: adm.rank(), rows }),
        Format::Csv => {
            let rows = rows.into_iter().map(|r| {
                let j: IndexSet = r.j.iter().copied().collect();
                vec![r.w, seq(&r.psi), r.length.to_string(), j.to_string(), r.block_size.to_string(), r.unique_min.to_string()]
            });
            csv_table(&["w", "psi", "length", "j", "block_size", "unique_min"], rows)?
        }
    };
    Ok((i32::from(failed), payload))
}

#[derive(Serialize)]
struct VerifyPayload {
    command: &'static str,
    #[serde(flatten)]
    report: SuiteReport,
}

fn verify(report: SuiteReport, fmt: Format) -> Outcome {
    let code = i32::from(!report.passed);
    let payload = match fmt {
        Format::Json => json(&VerifyPayload { command: "verify", report }),
        Format::Csv => {
            let rows = report.checks.into_iter().map(|c| {
                vec![
                    c.suite.to_string(),
                    c.name,
                    c.passed.to_string(),
                    c.detail,
                    c.counterexamples.join(";"),
                    c.items.join(";"),
                ]
            });
            csv_table(&["suite", "check", "passed", "detail", "counterexamples", "items"], rows)?
        }
    };
    Ok((code, payload))
}

pub(crate) fn dot(adm: &AdmSet) -> String {
    let mut s = format!("digraph adm_g{} {{\n  rankdir=BT;\n", adm.rank());
    for (id, w) in adm.words().iter().enumerate() {
        writeln!(s, "  n{id} [label=\"{w}\"];").unwrap();
    }
    for (x, y) in adm.hasse_edges() {
        writeln!(s, "  n{x} -> n{y};").unwrap();
    }
    s.push_str("}\n");
    s
}

#[derive(Serialize)]
struct HassePayload {
    command: &'static str,
    g: usize,
    nodes: usize,
    edges: usize,
    output: String,
}

fn hasse(adm: &AdmSet, output: Option<&Path>) -> Outcome {
    let text = dot(adm);
    let Some(path) = output else {
        return Ok((0, text));
    };
    std::fs::write(path, text)?;
    let p = HassePayload {
        command: "hasse",
        g: adm.rank(),
        nodes: adm.len(),
        edges: adm.hasse_edges().len(),
        output: path.display().to_string(),
    };
    Ok((0, json(&p)))
}
