// mckay: command-line front end.
//
//   mckay analyze-group <catalog-id | groupspec.json> [--hodge] [--euler] [--point-count q]
//   mckay check-mckay   <catalog-id | resolution.json> [--group <catalog-id | groupspec.json>]
//   mckay jets          <problem.json | --cyclic-model d> [--q p] [--level n] [--to-level n]
//   mckay catalog       [id]
//
// Exit codes: 0 success / identity holds, 1 verification failure,
// 2 input error, 3 budget error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mckay/mckay.hpp"

namespace {

using nlohmann::json;

enum ExitCode { kOk = 0, kVerificationFailed = 1, kInputError = 2, kBudgetError = 3 };

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mckay::input_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw mckay::input_error("'" + path + "' is not valid JSON: " + e.what());
    }
}

bool looks_like_file(const std::string& arg) {
    return arg.ends_with(".json") || std::filesystem::exists(arg);
}

mckay::GroupSpec load_group(const std::string& arg) {
    if (looks_like_file(arg)) return mckay::group_spec_from_json(read_json_file(arg));
    return mckay::group_catalog(arg);
}

struct Options {
    std::string format = "text";
    std::size_t cap_group = mckay::kDefaultGroupCap;
    std::uint64_t cap_budget = 100'000'000;
    bool hodge = false;
    bool euler = false;
    std::optional<long> point_count;
};

int analyze_group(const std::string& target, const Options& opt) {
    const mckay::Group g = mckay::generate_group(load_group(target), opt.cap_group);
    const mckay::McKayReport report = mckay::analyze_group(g);
    json out = mckay::to_json(report);
    std::ostringstream text;
    text << mckay::to_text(report);
    if (opt.euler) text << "euler:        " << report.euler.get_str() << "\n";
    if (opt.hodge) text << "hodge:        " << report.hodge << "\n";
    if (opt.point_count) {
        const mckay::Integer q(*opt.point_count);
        const auto measure = mckay::point_count_realize(report.measure_sum, q);
        const auto fiber = mckay::point_count_realize(report.fiber_sum, q);
        out["point_count"] = {{"q", *opt.point_count}, {"measure_sum", measure.get_str()}, {"fiber_sum", fiber.get_str()}};
        text << "point count at q=" << *opt.point_count << ": measure " << measure.get_str() << ", fiber "
             << fiber.get_str() << "\n";
    }
    if (opt.format == "json") std::cout << out.dump(2) << "\n";
    else std::cout << text.str();
    return kOk;
}

int check_mckay(const std::string& target, const std::optional<std::string>& group_arg, const Options& opt) {
    mckay::ResolutionData res;
    mckay::GroupSpec spec;
    if (looks_like_file(target)) {
        res = mckay::resolution_from_json(read_json_file(target));
        if (!group_arg) throw mckay::input_error("check-mckay: a resolution file needs --group");
        spec = load_group(*group_arg);
    } else {
        auto entry = mckay::ade_catalog(target);
        res = std::move(entry.resolution);
        spec = group_arg ? load_group(*group_arg) : std::move(entry.group);
    }
    const mckay::Group g = mckay::generate_group(spec, opt.cap_group);
    const mckay::McKayCheck check = mckay::check_mckay_identity(res, g);
    if (opt.format == "json") {
        std::cout << json{{"holds", check.holds},
                          {"lhs", mckay::to_json(check.lhs)},
                          {"rhs", mckay::to_json(check.rhs)},
                          {"lhs_text", check.lhs.to_string()},
                          {"rhs_text", check.rhs.to_string()}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "resolution side: " << check.lhs.to_string() << "\n"
                  << "group side:      " << check.rhs.to_string() << "\n"
                  << (check.holds ? "identity holds" : "identity FAILS") << "\n";
    }
    return check.holds ? kOk : kVerificationFailed;
}

struct JetOptions {
    std::optional<std::string> problem_file;
    std::optional<long> cyclic_model;
    std::optional<long> q;
    std::optional<int> level;
    std::optional<int> to_level;
    std::optional<long> partition;
    int lift_cap = 16;
    unsigned threads = 1;
};

int jets(const JetOptions& jo, const Options& opt) {
    mckay::JetCountTable table;
    std::optional<std::int64_t> partition = jo.partition;
    if (jo.problem_file) {
        const json j = read_json_file(*jo.problem_file);
        table.problem = mckay::jet_problem_from_json(j.contains("problem") ? j.at("problem") : j);
        const json& pj = j.contains("problem") ? j.at("problem") : j;
        if (!partition && pj.contains("partition_d")) partition = pj.at("partition_d").get<std::int64_t>();
    } else if (jo.cyclic_model) {
        table.problem = mckay::cyclic_surface_problem(*jo.cyclic_model, 3, 0);
        if (!partition) partition = *jo.cyclic_model;
    } else {
        throw mckay::input_error("jets: give a problem file or --cyclic-model d");
    }
    if (jo.q) table.problem.q = *jo.q;
    if (jo.level) table.problem.level = *jo.level;
    if (partition && table.problem.variables.size() != 3) {
        throw mckay::input_error("jets: class partition needs the (u, v, w) model of uv = w^d");
    }
    table.partition_d = partition;
    mckay::JetCaps caps;
    caps.budget = opt.cap_budget;
    caps.max_lift_level = jo.lift_cap;
    caps.threads = jo.threads;
    const int first = table.problem.level;
    const int last = jo.to_level ? *jo.to_level : first;
    for (int n = first; n <= last; ++n) {
        mckay::JetProblem p = table.problem;
        p.level = n;
        table.rows.push_back(mckay::jet_row(p, std::max(jo.lift_cap, n), caps, partition));
    }
    if (opt.format == "json") std::cout << mckay::to_json(table).dump(2) << "\n";
    else std::cout << mckay::to_text(table);
    for (const auto& r : table.rows) {
        if (!r.converged) {
            std::cerr << "warning: level " << r.level << " did not saturate by lift level " << r.lift_level << "\n";
            return kVerificationFailed;
        }
    }
    return kOk;
}

int catalog(const std::optional<std::string>& id, const Options& opt) {
    if (!id) {
        const json groups = {"cyclic:d", "cyclic:d:a1,...,an", "trivial:n", "binary-dihedral:m",
                             "binary-tetrahedral", "binary-octahedral", "binary-icosahedral"};
        json resolutions = {"A:d", "D:m", "E6", "E7", "E8", "cyclic:3:1,1,1"};
        if (opt.format == "json") {
            std::cout << json{{"groups", groups}, {"resolutions", resolutions}}.dump(2) << "\n";
        } else {
            std::cout << "groups:";
            for (const auto& g : groups) std::cout << " " << g.get<std::string>();
            std::cout << "\nresolutions:";
            for (const auto& r : resolutions) std::cout << " " << r.get<std::string>();
            std::cout << "\n";
        }
        return kOk;
    }
    json out;
    try {
        const auto entry = mckay::ade_catalog(*id);
        out = {{"group_id", entry.group_id}, {"group", mckay::to_json(entry.group)}, {"resolution", mckay::to_json(entry.resolution)}};
    } catch (const mckay::input_error&) {
        out = {{"group", mckay::to_json(mckay::group_catalog(*id))}};
    }
    std::cout << out.dump(2) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Motivic McKay correspondence toolkit"};
    app.require_subcommand(1, 1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--cap-group", opt.cap_group, "Maximum group order accepted by the closure");
        sub->add_option("--cap-budget", opt.cap_budget, "Maximum coefficient tuples examined per jet count");
    };

    std::string target;
    auto* analyze = app.add_subcommand("analyze-group", "Conjugacy classes, weights and measure sums of a group");
    analyze->add_option("group", target, "Catalog id or GroupSpec JSON file")->required();
    analyze->add_flag("--hodge", opt.hodge, "Print the Hodge realization of the fiber sum");
    analyze->add_flag("--euler", opt.euler, "Print the Euler characteristic of the fiber sum");
    analyze->add_option("--point-count", opt.point_count, "Print point counts at L = q");
    add_common(analyze);

    std::optional<std::string> group_arg;
    auto* check = app.add_subcommand("check-mckay", "Compare the resolution formula with the class sum");
    check->add_option("resolution", target, "Catalog id (A:d, D:m, E6, E7, E8, cyclic:3:1,1,1) or ResolutionData JSON")->required();
    check->add_option("--group", group_arg, "Catalog id or GroupSpec JSON file");
    add_common(check);

    JetOptions jo;
    auto* jet = app.add_subcommand("jets", "Count jets over F_q, with liftability saturation");
    jet->add_option("problem", jo.problem_file, "JetProblem JSON file");
    jet->add_option("--cyclic-model", jo.cyclic_model, "Use uv = w^d at the origin instead of a file");
    jet->add_option("--q", jo.q, "Prime field size");
    jet->add_option("--level", jo.level, "Truncation level n");
    jet->add_option("--to-level", jo.to_level, "Emit rows for levels n..to-level");
    jet->add_option("--partition", jo.partition, "Bucket liftable jets of uv = w^d by arc class");
    jet->add_option("--lift-cap", jo.lift_cap, "Highest lift level tried by saturation");
    jet->add_option("--threads", jo.threads, "Worker threads for enumeration");
    add_common(jet);

    std::optional<std::string> catalog_id;
    auto* cat = app.add_subcommand("catalog", "List catalog ids, or print the data behind one");
    cat->add_option("id", catalog_id, "Catalog id");
    add_common(cat);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*analyze) return analyze_group(target, opt);
        if (*check) return check_mckay(target, group_arg, opt);
        if (*jet) return jets(jo, opt);
        if (*cat) return catalog(catalog_id, opt);
    } catch (const mckay::budget_error& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kBudgetError;
    } catch (const mckay::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const mckay::division_by_zero& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
