use serde::Serialize;

use segrelat::invariants::{
    beta_t, principal_specialization, rank_alpha_beta, rank_w_t_q, w_t, w_t_q, QRoute, RankRoute,
    WRoute,
};
use segrelat::multisym::{dimension, phi_t};
use segrelat::poset::{
    boolean_lattice, chain_census, fixture, mobius, rank_select, segre_power, subspace_lattice,
    verify_el, ChainCensus, ElReport, LabeledPoset,
};
use segrelat::symfunc::schur_to_h;
use segrelat::{Basis, Budget, MultiSymFunc, Partition, QPoly, QRatNF, RankSet};

use crate::render::{self, json, pairs_csv, pairs_latex};
use crate::{
    BasisArg, CliError, Format, Outcome, PosetSource, QRouteArg, RankList, RankRouteArg, WRouteArg,
};

type CmdResult = Result<Outcome, CliError>;

impl From<WRouteArg> for WRoute {
    fn from(r: WRouteArg) -> Self {
        match r {
            WRouteArg::Recurrence => WRoute::Recurrence,
            WRouteArg::Brute => WRoute::Brute,
            WRouteArg::Dimension => WRoute::Dimension,
            WRouteArg::Genfun => WRoute::Genfun,
        }
    }
}

impl From<QRouteArg> for QRoute {
    fn from(r: QRouteArg) -> Self {
        match r {
            QRouteArg::Recurrence => QRoute::Recurrence,
            QRouteArg::Brute => QRoute::Brute,
        }
    }
}

impl From<RankRouteArg> for RankRoute {
    fn from(r: RankRouteArg) -> Self {
        match r {
            RankRouteArg::Syt => RankRoute::Syt,
            RankRouteArg::Recurrence => RankRoute::Recurrence,
            RankRouteArg::InclusionExclusion => RankRoute::InclusionExclusion,
        }
    }
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Z => Basis::Z,
            BasisArg::S => Basis::S,
        }
    }
}

fn route_name<T: clap::ValueEnum>(r: T) -> String {
    r.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

fn rank_set(n: usize, list: Option<RankList>) -> Result<Option<RankSet>, CliError> {
    list.map(|l| RankSet::new(n, l.0))
        .transpose()
        .map_err(CliError::from)
}

fn check_t(t: usize) -> Result<(), CliError> {
    if t == 0 {
        Err(CliError::Usage("--t must be at least 1".into()))
    } else {
        Ok(())
    }
}

#[derive(Serialize)]
struct WTable {
    route: String,
    nmax: usize,
    tmax: usize,
    rows: Vec<WRow>,
}

#[derive(Serialize)]
struct WRow {
    t: usize,
    values: Vec<String>,
}

pub fn wtable(
    nmax: usize,
    tmax: usize,
    route: WRouteArg,
    fmt: Format,
    budget: &Budget,
) -> CmdResult {
    if tmax == 0 {
        return Err(CliError::Usage("--tmax must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(tmax);
    for t in 1..=tmax {
        let values = (0..=nmax)
            .map(|n| w_t(n, t, route.into(), budget).map(|w| w.to_string()))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(WRow { t, values });
    }
    let text = match fmt {
        Format::Json => json(&WTable {
            route: route_name(route),
            nmax,
            tmax,
            rows,
        }),
        Format::Csv => {
            let mut out = String::from("t");
            for n in 0..=nmax {
                out.push_str(&format!(",{n}"));
            }
            out.push('\n');
            for row in &rows {
                out.push_str(&format!("{},{}\n", row.t, row.values.join(",")));
            }
            out
        }
        Format::Latex => {
            let mut out = format!("\\begin{{tabular}}{{c|{}}}\n", "c".repeat(nmax + 1));
            let header: Vec<String> = (0..=nmax).map(|n| n.to_string()).collect();
            out.push_str(&format!(
                "$t \\backslash n$ & {} \\\\ \\hline\n",
                header.join(" & ")
            ));
            for row in &rows {
                out.push_str(&format!("{} & {} \\\\\n", row.t, row.values.join(" & ")));
            }
            out.push_str("\\end{tabular}\n");
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct WqOut {
    n: usize,
    t: usize,
    rank_set: Option<Vec<usize>>,
    route: String,
    coeffs: QPoly,
    at_one: String,
}

pub fn wq(
    n: usize,
    t: usize,
    list: Option<RankList>,
    route: QRouteArg,
    fmt: Format,
    budget: &Budget,
) -> CmdResult {
    check_t(t)?;
    let j = rank_set(n, list)?;
    let poly = match &j {
        Some(j) => rank_w_t_q(n, t, j, route.into(), budget)?,
        None => w_t_q(n, t, route.into(), budget)?,
    };
    let text = match fmt {
        Format::Json => json(&WqOut {
            n,
            t,
            rank_set: j.map(|j| j.elements().to_vec()),
            route: route_name(route),
            at_one: poly.eval_at_one().to_string(),
            coeffs: poly,
        }),
        Format::Csv => render::qpoly_csv(&poly),
        Format::Latex => format!("${}$\n", render::qpoly_latex(&poly)),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct BetaOut {
    n: usize,
    t: usize,
    rank_set: Option<Vec<usize>>,
    route: Option<String>,
    dimension: String,
    schur_nonnegative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<MultiSymFunc>,
    beta: MultiSymFunc,
}

pub fn beta(
    n: usize,
    t: usize,
    basis: BasisArg,
    list: Option<RankList>,
    route: RankRouteArg,
    fmt: Format,
) -> CmdResult {
    check_t(t)?;
    let j = rank_set(n, list)?;
    let (alpha, beta) = match &j {
        Some(j) => {
            let (a, b) = rank_alpha_beta(n, t, j, route.into())?;
            (Some(a.to_basis(basis.into())), b)
        }
        None => (None, beta_t(n, t)?),
    };
    let dim = dimension(&beta);
    let nonneg = beta.is_schur_nonnegative();
    let beta = beta.to_basis(basis.into());
    let text = match fmt {
        Format::Json => json(&BetaOut {
            n,
            t,
            rank_set: j.as_ref().map(|j| j.elements().to_vec()),
            route: j.as_ref().map(|_| route_name(route)),
            dimension: dim.to_string(),
            schur_nonnegative: nonneg,
            alpha,
            beta,
        }),
        Format::Csv => {
            let mut out = String::from("which,mus,coeff\n");
            if let Some(a) = &alpha {
                render::multisym_csv_rows("alpha", a, &mut out);
            }
            render::multisym_csv_rows("beta", &beta, &mut out);
            out
        }
        Format::Latex => {
            let mut out = String::new();
            if let Some(a) = &alpha {
                out.push_str(&format!("\\alpha = {}\n\n", render::multisym_latex(a)));
            }
            out.push_str(&format!("\\beta = {}\n", render::multisym_latex(&beta)));
            out
        }
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct Term {
    mus: Vec<Partition>,
    coeff: String,
}

#[derive(Serialize)]
struct PhiOut {
    schur: Partition,
    t: usize,
    not_all_nonnegative: bool,
    negative_terms: Vec<Term>,
    image: MultiSymFunc,
}

pub fn phi(lambda: &Partition, t: usize, basis: BasisArg, fmt: Format) -> CmdResult {
    check_t(t)?;
    let image = phi_t(&schur_to_h(lambda), t)?;
    let negative: Vec<Term> = image
        .negative_schur_terms()
        .into_iter()
        .map(|(mus, c)| Term {
            mus,
            coeff: c.to_string(),
        })
        .collect();
    let image = image.to_basis(basis.into());
    let text = match fmt {
        Format::Json => json(&PhiOut {
            schur: lambda.clone(),
            t,
            not_all_nonnegative: !negative.is_empty(),
            negative_terms: negative,
            image,
        }),
        Format::Csv => {
            let mut out = String::from("which,mus,coeff\n");
            render::multisym_csv_rows("image", &image, &mut out);
            out
        }
        Format::Latex => format!(
            "\\Phi_{{{t}}}(s_{{{}}}) = {}\n",
            lambda,
            render::multisym_latex(&image)
        ),
    };
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct PsOut {
    n: usize,
    t: usize,
    rank_set: Option<Vec<usize>>,
    specialization: QRatNF,
    betti_numerator: QPoly,
    equal: bool,
}

pub fn ps(n: usize, t: usize, list: Option<RankList>, fmt: Format, budget: &Budget) -> CmdResult {
    check_t(t)?;
    let j = rank_set(n, list)?;
    let (characteristic, betti) = match &j {
        Some(j) => (
            rank_alpha_beta(n, t, j, RankRoute::Recurrence)?.1,
            rank_w_t_q(n, t, j, QRoute::Recurrence, budget)?,
        ),
        None => (beta_t(n, t)?, w_t_q(n, t, QRoute::Recurrence, budget)?),
    };
    let spec = principal_specialization(&characteristic)?;
    let equal = spec == QRatNF::new(betti.clone(), n, t);
    let text = match fmt {
        Format::Json => json(&PsOut {
            n,
            t,
            rank_set: j.as_ref().map(|j| j.elements().to_vec()),
            specialization: spec.clone(),
            betti_numerator: betti.clone(),
            equal,
        }),
        Format::Csv => pairs_csv(&[
            ("n", n.to_string()),
            ("t", t.to_string()),
            ("specialization_numerator", spec.numerator.to_string()),
            ("betti_numerator", betti.to_string()),
            ("equal", equal.to_string()),
        ]),
        Format::Latex => format!(
            "\\mathrm{{ps}} = \\frac{{{}}}{{\\prod_{{i=1}}^{{{n}}} (1-q^i)^{{{t}}}}}, \\quad \\tilde\\beta = {} \\quad ({})\n",
            render::qpoly_latex(&spec.numerator),
            render::qpoly_latex(&betti),
            if equal { "equal" } else { "NOT equal" }
        ),
    };
    Ok(Outcome {
        text,
        failure: (!equal).then(|| {
            format!("principal specialization differs from the Betti polynomial for n={n}, t={t}")
        }),
    })
}

fn load_poset(src: &PosetSource, budget: &Budget) -> Result<(LabeledPoset, String), CliError> {
    let (base, name) = if let Some(name) = &src.fixture {
        (fixture(name)?, format!("fixture {name}"))
    } else if let Some(n) = src.boolean {
        (boolean_lattice(n, budget)?, format!("boolean {n}"))
    } else if let Some(n) = src.subspace {
        let q = src
            .q
            .ok_or_else(|| CliError::Usage("--subspace needs --q".into()))?;
        (
            subspace_lattice(n, q, budget)?,
            format!("subspace {n} q={q}"),
        )
    } else if let Some(path) = &src.file {
        let text = std::fs::read_to_string(path)?;
        (
            text.parse::<LabeledPoset>()?,
            format!("file {}", path.display()),
        )
    } else {
        return Err(CliError::Usage(
            "choose one of --fixture, --boolean, --subspace, --file".into(),
        ));
    };
    if src.segre == 1 {
        Ok((base, name))
    } else {
        let p = segre_power(&base, src.segre, budget)?;
        Ok((p, format!("{name} segre {}", src.segre)))
    }
}

pub fn poset_build(src: &PosetSource, budget: &Budget) -> CmdResult {
    let (p, _) = load_poset(src, budget)?;
    Ok(Outcome::ok(p.to_string()))
}

#[derive(Serialize)]
struct ElOut {
    poset: String,
    elements: usize,
    rank: usize,
    #[serde(flatten)]
    report: ElReport,
    decreasing_chains: u64,
    mobius: String,
}

pub fn poset_verify_el(src: &PosetSource, fmt: Format, budget: &Budget) -> CmdResult {
    let (p, name) = load_poset(src, budget)?;
    let report = verify_el(&p, budget)?;
    let census = chain_census(&p, budget)?;
    let mu = mobius(&p, None)?;
    let pass = report.pass;
    let witness = report.witness.clone();
    let out = ElOut {
        poset: name,
        elements: p.len(),
        rank: p.rank(),
        report,
        decreasing_chains: census.decreasing,
        mobius: mu.to_string(),
    };
    let pairs = || {
        let mut v = vec![
            ("poset", out.poset.clone()),
            ("elements", out.elements.to_string()),
            ("rank", out.rank.to_string()),
            ("pass", pass.to_string()),
            (
                "intervals_checked",
                out.report.intervals_checked.to_string(),
            ),
            ("decreasing_chains", out.decreasing_chains.to_string()),
            ("mobius", out.mobius.clone()),
        ];
        if let Some(w) = &witness {
            v.push((
                "witness",
                format!("[{}, {}] {}", w.lower, w.upper, w.reason),
            ));
        }
        v
    };
    let text = match fmt {
        Format::Json => json(&out),
        Format::Csv => pairs_csv(&pairs()),
        Format::Latex => pairs_latex(&pairs()),
    };
    Ok(Outcome {
        text,
        failure: witness.map(|w| {
            format!(
                "not an EL-labelling on [{}, {}]: {}",
                w.lower, w.upper, w.reason
            )
        }),
    })
}

#[derive(Serialize)]
struct MobiusOut {
    poset: String,
    rank_set: Option<Vec<usize>>,
    lower: String,
    upper: String,
    mobius: String,
}

pub fn poset_mobius(
    src: &PosetSource,
    list: Option<RankList>,
    bounds: Option<(String, String)>,
    fmt: Format,
    budget: &Budget,
) -> CmdResult {
    let (p, name) = load_poset(src, budget)?;
    if list.is_some() && bounds.is_some() {
        return Err(CliError::Usage(
            "--rank-set cannot be combined with --lower/--upper".into(),
        ));
    }
    let j = rank_set(p.rank(), list)?;
    let target = match &j {
        Some(j) => rank_select(&p, j)?,
        None => p,
    };
    let lookup = |id: &str| {
        target
            .index_of(id)
            .ok_or_else(|| CliError::Usage(format!("no element `{id}`")))
    };
    let (x, y) = match &bounds {
        Some((lo, hi)) => (lookup(lo)?, lookup(hi)?),
        None => (target.bottom(), target.top()),
    };
    let mu = mobius(&target, Some((x, y)))?;
    let out = MobiusOut {
        poset: name,
        rank_set: j.map(|j| j.elements().to_vec()),
        lower: target.id(x).to_string(),
        upper: target.id(y).to_string(),
        mobius: mu.to_string(),
    };
    let pairs = vec![
        ("poset", out.poset.clone()),
        ("lower", out.lower.clone()),
        ("upper", out.upper.clone()),
        ("mobius", out.mobius.clone()),
    ];
    let text = match fmt {
        Format::Json => json(&out),
        Format::Csv => pairs_csv(&pairs),
        Format::Latex => pairs_latex(&pairs),
    };
    Ok(Outcome::ok(text))
}

fn word_text(w: &[segrelat::Label]) -> String {
    w.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn poset_census(src: &PosetSource, fmt: Format, budget: &Budget) -> CmdResult {
    let (p, _) = load_poset(src, budget)?;
    let census: ChainCensus = chain_census(&p, budget)?;
    let text = match fmt {
        Format::Json => json(&census),
        Format::Csv => {
            let mut out = String::from("word,descents,count\n");
            for w in &census.words {
                let des: Vec<String> = w.descents.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "{},{},{}\n",
                    render::csv_quote(&word_text(&w.word)),
                    render::csv_quote(&des.join(" ")),
                    w.count
                ));
            }
            out
        }
        Format::Latex => {
            let mut out =
                String::from("\\begin{tabular}{llr}\nword & descents & count \\\\ \\hline\n");
            for w in &census.words {
                let des: Vec<String> = w.descents.iter().map(usize::to_string).collect();
                out.push_str(&format!(
                    "{} & \\{{{}\\}} & {} \\\\\n",
                    word_text(&w.word),
                    des.join(","),
                    w.count
                ));
            }
            out.push_str("\\end{tabular}\n");
            out
        }
    };
    Ok(Outcome::ok(text))
}
