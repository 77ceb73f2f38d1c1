use std::fs;
use std::io::Write;
use std::path::Path;

use rangesketch::binary_net::{decode, random_net, BinaryNet, PartitionVector};
use rangesketch::discrepancy::{
    combinatorial_discrepancy_exact, corner_sum_bound_holds, corner_volume_distance,
    corner_volumes, lebesgue_discrepancy, union_discrepancy,
};
use rangesketch::hard_family::{build_family, FamilyOptions, Reading};
use rangesketch::onedim::enumerate_onedim;
use rangesketch::ratio::{format_eps, parse_eps};
use rangesketch::sketch::{build_sketch, error_profile, Sketch};
use rangesketch::{bench, epsnet, GridPointSet, Rect};

use crate::error::{CliError, CliResult};
use crate::table::{Provenance, Table};
use crate::{
    BenchArgs, BuildArgs, Cli, Command, DiscArgs, DiscMode, EvalArgs, FamilyArgs, NetArgs,
    NetGenArgs, OnedimArgs, QueryArgs, ReadingArg,
};

struct Ctx<'a> {
    cli: &'a Cli,
}

impl Ctx<'_> {
    fn prov(&self) -> Provenance {
        Provenance {
            seed: self.cli.seed,
        }
    }

    fn emit(&self, table: &Table) -> CliResult<()> {
        if self.cli.quiet {
            return Ok(());
        }
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        table.write(&mut lock, self.cli.format, self.prov())?;
        lock.flush().map_err(|e| CliError::Output(e.to_string()))
    }

    fn warn(&self, msg: &str) {
        if !self.cli.quiet {
            eprintln!("warning: {msg}");
        }
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let ctx = Ctx { cli };
    match &cli.command {
        Command::Build(a) => build(&ctx, a),
        Command::Query(a) => query(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Net(a) => net(&ctx, a),
        Command::NetGen(a) => net_gen(&ctx, a),
        Command::Disc(a) => disc(&ctx, a),
        Command::Family(a) => family(&ctx, a),
        Command::Bench(a) => run_bench(&ctx, a),
        Command::OnedimLb(a) => onedim(&ctx, a),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn read_points(path: &Path) -> CliResult<GridPointSet> {
    Ok(GridPointSet::from_text(&read_text(path)?)?)
}

fn read_sketch(path: &Path) -> CliResult<Sketch> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(Sketch::deserialize(&bytes)?)
}

fn build(ctx: &Ctx, a: &BuildArgs) -> CliResult<()> {
    let eps = parse_eps(&a.eps)?;
    let p = read_points(&a.input)?;
    let s = build_sketch(&p, eps, ctx.cli.seed)?;
    let bytes = s.serialize();
    write_file(&a.out, &bytes)?;
    let size = s.size_report();
    let mut t = Table::new(&[
        "n",
        "points",
        "eps",
        "eps_internal",
        "m",
        "levels",
        "chunk",
        "coordinate_bits",
        "indicator_bits",
        "fixed_bits",
        "total_bits",
        "bytes",
    ]);
    t.push(vec![
        s.n().into(),
        p.len().into(),
        format_eps(s.eps()).into(),
        format_eps(s.eps_internal()).into(),
        s.m().into(),
        s.levels().into(),
        s.chunk().into(),
        size.coordinate_bits.into(),
        size.indicator_bits.into(),
        size.fixed_bits.into(),
        size.payload_bits().into(),
        bytes.len().into(),
    ]);
    ctx.emit(&t)
}

enum Query {
    Rect(Rect),
    Dominance(u32, u32),
}

fn parse_query(text: &str) -> CliResult<Query> {
    let nums: Vec<u32> = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u32>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("query {text:?}: {e}")))?;
    match nums[..] {
        [x, y] => Ok(Query::Dominance(x, y)),
        [x_lo, x_hi, y_lo, y_hi] => Ok(Query::Rect(Rect::new(x_lo, x_hi, y_lo, y_hi)?)),
        _ => Err(CliError::Usage(format!(
            "query {text:?} needs 2 (x y) or 4 (x_lo x_hi y_lo y_hi) numbers"
        ))),
    }
}

fn query(ctx: &Ctx, a: &QueryArgs) -> CliResult<()> {
    let s = read_sketch(&a.sketch)?;
    let mut queries = Vec::new();
    for r in &a.rects {
        match parse_query(r)? {
            q @ Query::Rect(_) => queries.push(q),
            Query::Dominance(..) => {
                return Err(CliError::Usage(format!("--rect {r:?} needs 4 numbers")))
            }
        }
    }
    for d in &a.dominance {
        match parse_query(d)? {
            q @ Query::Dominance(..) => queries.push(q),
            Query::Rect(_) => {
                return Err(CliError::Usage(format!(
                    "--dominance {d:?} needs 2 numbers"
                )))
            }
        }
    }
    if let Some(path) = &a.queries {
        for line in read_text(path)?.lines() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                queries.push(parse_query(line)?);
            }
        }
    }
    let mut t = Table::new(&["x_lo", "x_hi", "y_lo", "y_hi", "estimate"]);
    for q in queries {
        let (r, est) = match q {
            Query::Rect(r) => (r, s.query_four_sided(&r)?),
            Query::Dominance(x, y) => (Rect::two_sided(x, y), s.query_two_sided(x, y)? as i64),
        };
        t.push(vec![
            r.x_lo.into(),
            r.x_hi.into(),
            r.y_lo.into(),
            r.y_hi.into(),
            est.into(),
        ]);
    }
    ctx.emit(&t)
}

fn eval(ctx: &Ctx, a: &EvalArgs) -> CliResult<()> {
    let s = read_sketch(&a.sketch)?;
    let p = read_points(&a.input)?;
    if p.n() != s.n() {
        return Err(CliError::Usage(format!(
            "point file is on a {0}x{0} grid, sketch on {1}x{1}",
            p.n(),
            s.n()
        )));
    }
    let prof = error_profile(&s, &p, a.trials, ctx.cli.seed)?;
    if let Some(path) = &a.rows_out {
        let mut rows = Table::new(&["x_lo", "x_hi", "y_lo", "y_hi", "exact", "estimate", "error"]);
        for r in &prof.rows {
            rows.push(vec![
                r.rect.x_lo.into(),
                r.rect.x_hi.into(),
                r.rect.y_lo.into(),
                r.rect.y_hi.into(),
                r.exact.into(),
                r.estimate.into(),
                r.error.into(),
            ]);
        }
        write_file(path, rows.to_string(ctx.cli.format, ctx.prov())?.as_bytes())?;
    }
    let mut t = Table::new(&[
        "trials",
        "max_abs_error",
        "mean_abs_error",
        "two_sided_bound",
        "eps_n",
        "within_eps_n",
    ]);
    t.push(vec![
        a.trials.into(),
        prof.max_abs_error.into(),
        prof.mean_abs_error.into(),
        prof.two_sided_bound.to_string().into(),
        prof.four_sided_bound.to_string().into(),
        (num_le(prof.max_abs_error, prof.four_sided_bound)).into(),
    ]);
    ctx.emit(&t)
}

fn num_le(v: u64, bound: num_rational::Ratio<u64>) -> bool {
    num_rational::Ratio::from_integer(v) <= bound
}

fn net(ctx: &Ctx, a: &NetArgs) -> CliResult<()> {
    let eps = parse_eps(&a.eps)?;
    let p = read_points(&a.input)?;
    let built = epsnet::build_net(&p, eps, ctx.cli.seed)?;
    let check = epsnet::verify_net(&p, built.points(), eps);
    if let Some(path) = &a.out {
        write_file(path, built.to_text(p.n()).as_bytes())?;
    }
    let mut t = Table::new(&["n", "points", "eps", "threshold", "net_size", "verified"]);
    t.push(vec![
        p.n().into(),
        p.len().into(),
        format_eps(eps).into(),
        built.threshold().into(),
        built.len().into(),
        check.is_net().into(),
    ]);
    ctx.emit(&t)
}

fn net_gen(ctx: &Ctx, a: &NetGenArgs) -> CliResult<()> {
    let (net, z) = match &a.vector {
        Some(path) => {
            let z = PartitionVector::from_hex(a.n, &read_text(path)?)?;
            (decode(&z), z)
        }
        None => random_net(a.n, ctx.cli.seed)?,
    };
    let points = net.to_point_set();
    if let Some(path) = &a.out {
        write_file(path, points.to_text().as_bytes())?;
    }
    if let Some(path) = &a.vector_out {
        write_file(path, format!("{}\n", z.to_hex()).as_bytes())?;
    }
    let valid = rangesketch::binary_net::is_binary_net(&points);
    let mut t = Table::new(&["n", "vector_bits", "valid", "corner_volume_sum", "vector"]);
    t.push(vec![
        a.n.into(),
        z.len().into(),
        valid.into(),
        rangesketch::discrepancy::corner_volume_sum(&net)
            .to_string()
            .into(),
        z.to_hex().into(),
    ]);
    ctx.emit(&t)
}

fn second_input(a: &DiscArgs) -> CliResult<GridPointSet> {
    let path = a
        .input2
        .as_ref()
        .ok_or_else(|| CliError::Usage("this mode needs --input2".into()))?;
    read_points(path)
}

fn rect_cells(r: &Rect) -> Vec<crate::table::Cell> {
    vec![r.x_lo.into(), r.x_hi.into(), r.y_lo.into(), r.y_hi.into()]
}

fn disc(ctx: &Ctx, a: &DiscArgs) -> CliResult<()> {
    let p = read_points(&a.input)?;
    match a.mode {
        DiscMode::Lebesgue => {
            let rep = lebesgue_discrepancy(&p);
            let mut t = Table::new(&[
                "value",
                "value_float",
                "x_lo",
                "x_hi",
                "y_lo",
                "y_hi",
                "count",
            ]);
            let mut row = vec![
                rep.value.to_string().into(),
                (*rep.value.numer() as f64 / *rep.value.denom() as f64).into(),
            ];
            row.extend(rect_cells(&rep.witness));
            row.push(rep.count.into());
            t.push(row);
            ctx.emit(&t)
        }
        DiscMode::Comb => {
            let rep = combinatorial_discrepancy_exact(&p, a.max_points)?;
            let coloring: String = rep
                .coloring
                .iter()
                .map(|&c| if c > 0 { '+' } else { '-' })
                .collect();
            let mut t = Table::new(&["value", "x_lo", "x_hi", "y_lo", "y_hi", "coloring"]);
            let mut row = vec![rep.value.into()];
            row.extend(rect_cells(&rep.witness));
            row.push(coloring.into());
            t.push(row);
            ctx.emit(&t)
        }
        DiscMode::Union => {
            let q = second_input(a)?;
            let rep = union_discrepancy(&p, &q)?;
            let mut t = Table::new(&["value", "x_lo", "x_hi", "y_lo", "y_hi", "log2_n"]);
            let mut row = vec![rep.value.into()];
            row.extend(rect_cells(&rep.witness));
            row.push(f64::from(p.n()).log2().into());
            t.push(row);
            ctx.emit(&t)
        }
        DiscMode::Corner => {
            let net = BinaryNet::new(&p)?;
            let table = corner_volumes(&net);
            let other = match &a.input2 {
                Some(_) => Some(BinaryNet::new(&second_input(a)?)?),
                None => None,
            };
            let mut t = Table::new(&["k", "i", "j", "x", "y", "volume"]);
            for e in table.entries() {
                t.push(vec![
                    e.k.into(),
                    e.i.into(),
                    e.j.into(),
                    e.x.to_string().into(),
                    e.y.to_string().into(),
                    e.volume.to_string().into(),
                ]);
            }
            ctx.emit(&t)?;
            if !ctx.cli.quiet {
                let sum = num_rational::Ratio::new(table.sum_quarters(), 4);
                eprintln!(
                    "corner volume sum {sum}; >= n^2 log n/(16e): {}",
                    corner_sum_bound_holds(&table)
                );
                if let Some(o) = other {
                    eprintln!(
                        "corner volume distance {}",
                        corner_volume_distance(&net, &o)?
                    );
                }
            }
            Ok(())
        }
    }
}

fn family(ctx: &Ctx, a: &FamilyArgs) -> CliResult<()> {
    let opts = FamilyOptions {
        reading: match a.reading {
            ReadingArg::Up => Reading::RowsUp,
            ReadingArg::Down => Reading::RowsDown,
        },
        completions: a.completions,
        max_pairs: a.pairs,
        union_pairs: a.union_pairs,
        max_draws: None,
    };
    let len = rangesketch::hard_family::block_count(a.n)?;
    if len < 8 {
        ctx.warn(&format!(
            "code length N = {len} is degenerate at n = {}; use n >= 4096 for meaningful distances",
            a.n
        ));
    }
    let fam = build_family(a.n, a.count, ctx.cli.seed, &opts)?;
    let mut t = Table::new(&[
        "a",
        "b",
        "hamming",
        "delta",
        "block_delta",
        "h_n_over_8",
        "chain_holds",
        "union_value",
        "x_lo",
        "x_hi",
        "y_lo",
        "y_hi",
    ]);
    for p in &fam.pairs {
        let floor = num_rational::Ratio::new(p.hamming as u64 * u64::from(a.n), 8);
        let mut row = vec![
            p.a.into(),
            p.b.into(),
            p.hamming.into(),
            p.delta.to_string().into(),
            p.block_delta.to_string().into(),
            floor.to_string().into(),
            p.chain_holds.into(),
        ];
        match p.union {
            Some(u) => {
                row.push(u.value.into());
                row.extend(rect_cells(&u.witness));
            }
            None => row.extend((0..5).map(|_| "".into())),
        }
        t.push(row);
    }
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (i, net) in fam.nets.iter().enumerate() {
            let path = dir.join(format!("member_{i:04}.txt"));
            write_file(&path, net.to_point_set().to_text().as_bytes())?;
        }
        let code: String = fam
            .code
            .iter()
            .map(|t| format!("{}\n", t.to_hex()))
            .collect();
        write_file(&dir.join("code.hex"), code.as_bytes())?;
        let report = t.to_string(crate::table::Format::Csv, ctx.prov())?;
        write_file(&dir.join("report.csv"), report.as_bytes())?;
    }
    ctx.emit(&t)
}

fn run_bench(ctx: &Ctx, a: &BenchArgs) -> CliResult<()> {
    let epses = a
        .eps
        .iter()
        .map(|e| parse_eps(e))
        .collect::<Result<Vec<_>, _>>()?;
    let sweep: Vec<_> =
        a.n.iter()
            .flat_map(|&n| epses.iter().map(move |&e| (n, e)))
            .collect();
    let rows = bench::bench(&sweep, a.trials, ctx.cli.seed)?;
    let mut t = Table::new(&[
        "n",
        "eps",
        "m",
        "bits",
        "bytes",
        "formula",
        "bits_over_formula",
        "max_error",
        "eps_n",
        "trials",
    ]);
    for r in rows {
        t.push(vec![
            r.n.into(),
            format_eps(r.eps).into(),
            r.m.into(),
            r.bits.into(),
            r.bytes.into(),
            r.formula.into(),
            r.ratio.into(),
            r.max_error.into(),
            r.eps_n.into(),
            r.trials.into(),
        ]);
    }
    ctx.emit(&t)
}

fn onedim(ctx: &Ctx, a: &OnedimArgs) -> CliResult<()> {
    let eps = parse_eps(&a.eps)?;
    let r = enumerate_onedim(a.n, eps)?;
    let mut t = Table::new(&[
        "n",
        "eps",
        "groups",
        "cluster_size",
        "placements",
        "distinct_sets",
        "pairs_checked",
        "min_prefix_gap",
        "all_distinguished",
    ]);
    t.push(vec![
        r.n.into(),
        format_eps(eps).into(),
        r.groups.into(),
        r.cluster_size.into(),
        r.placements.into(),
        r.distinct_sets.into(),
        r.pairs_checked.into(),
        r.min_prefix_gap.into(),
        r.all_distinguished().into(),
    ]);
    ctx.emit(&t)
}
