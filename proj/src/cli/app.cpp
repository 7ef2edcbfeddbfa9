#include "smellhunter/cli/app.hpp"

#include <atomic>
#include <charconv>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "smellhunter/cli/client.hpp"
#include "smellhunter/dsl/parser.hpp"
#include "smellhunter/gateway/http_server.hpp"
#include "smellhunter/inputs/parse.hpp"

namespace smellhunter::cli {

using nlohmann::json;

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Defaults < config file < SMELLHUNTER_SERVER < flags.
std::optional<std::string> load_config_file(const std::string& path, CliConfig& cfg) {
    auto text = read_file(path);
    if (!text) return "cannot read config file '" + path + "'";
    try {
        auto j = json::parse(*text);
        if (j.contains("server_url")) cfg.server_url = j.at("server_url").get<std::string>();
        if (j.contains("poll_interval_ms")) cfg.poll_interval_ms = j.at("poll_interval_ms").get<int>();
        if (j.contains("timeout_ms")) cfg.timeout_ms = j.at("timeout_ms").get<int>();
        if (j.contains("format")) {
            auto f = j.at("format").get<std::string>();
            if (f == "table") cfg.format = OutputFormat::table;
            else if (f == "document") cfg.format = OutputFormat::document;
            else return "config: format must be 'table' or 'document'";
        }
    } catch (const std::exception& e) {
        return "config file '" + path + "': " + e.what();
    }
    return std::nullopt;
}

struct Filters {
    std::string smell, severity, org, project, bbox, from, to;
    std::size_t offset = 0;
    std::size_t limit = 100;
};

void add_filter_options(CLI::App* cmd, Filters& f) {
    cmd->add_option("--smell", f.smell, "Smell name");
    cmd->add_option("--severity", f.severity, "low, medium, high or critical");
    cmd->add_option("--org", f.org, "Organization id");
    cmd->add_option("--project", f.project, "Project id");
    cmd->add_option("--bbox", f.bbox, "minLat,maxLat,minLon,maxLon");
    cmd->add_option("--from", f.from, "Earliest detection time (inclusive)");
    cmd->add_option("--to", f.to, "Latest detection time (exclusive)");
}

// Arity and number checks happen locally; range checks are left to the server.
std::optional<std::string> filter_params(const Filters& f, std::multimap<std::string, std::string>& p) {
    if (!f.smell.empty()) p.emplace("smell", f.smell);
    if (!f.severity.empty()) {
        if (!dsl::parse_severity(f.severity)) return "--severity must be low, medium, high or critical";
        p.emplace("severity", f.severity);
    }
    if (!f.org.empty()) p.emplace("org", f.org);
    if (!f.project.empty()) p.emplace("project", f.project);
    if (!f.bbox.empty()) {
        std::size_t n = 0;
        std::string_view rest = f.bbox;
        for (;;) {
            auto comma = rest.find(',');
            auto part = rest.substr(0, comma);
            double d;
            auto r = std::from_chars(part.data(), part.data() + part.size(), d);
            if (part.empty() || r.ec != std::errc{} || r.ptr != part.data() + part.size())
                return "--bbox expects four numbers: minLat,maxLat,minLon,maxLon";
            ++n;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (n != 4) return "--bbox expects four numbers: minLat,maxLat,minLon,maxLon";
        p.emplace("bbox", f.bbox);
    }
    if (!f.from.empty()) p.emplace("from", f.from);
    if (!f.to.empty()) p.emplace("to", f.to);
    return std::nullopt;
}

std::string server_error(const HttpReply& r) {
    std::string msg;
    try {
        msg = json::parse(r.body).value("error", r.body);
    } catch (...) {
        msg = r.body;
    }
    return "server returned HTTP " + std::to_string(r.status) + ": " + msg;
}

class Commands {
public:
    Commands(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int analyze(const std::string& script_path, const std::string& metrics_path, const std::string& thresholds_path,
                const std::string& metadata_path, const std::string& label, bool wait) {
        std::map<std::string, std::string> parts;
        const std::pair<const char*, const std::string*> files[] = {{"script", &script_path},
                                                                     {"metrics", &metrics_path},
                                                                     {"thresholds", &thresholds_path},
                                                                     {"metadata", &metadata_path}};
        bool ok = true;
        for (const auto& [part, path] : files) {
            auto content = read_file(*path);
            if (!content) {
                err_ << "error: cannot read " << part << " file '" << *path << "'\n";
                ok = false;
                continue;
            }
            parts.emplace(part, std::move(*content));
        }
        if (!ok) return kExitUsage;
        if (!label.empty()) parts.emplace("label", label);

        // structural checks before touching the network
        if (auto parsed = dsl::parse_script(parts["script"]); !parsed) {
            for (const auto& d : parsed.error())
                err_ << script_path << ":" << d.line << ":" << d.column << ": " << dsl::to_string(d.kind) << ": "
                     << d.message << "\n";
            ok = false;
        }
        auto report = [&](const char* part, const std::string& path, const inputs::InputErrors& errors) {
            for (const auto& e : errors) err_ << path << ": " << part << ": " << e.describe() << "\n";
            ok = false;
        };
        if (auto t = inputs::parse_metric_table(parts["metrics"]); !t) report("metrics", metrics_path, t.error());
        if (auto t = inputs::parse_thresholds(parts["thresholds"]); !t) report("thresholds", thresholds_path, t.error());
        if (auto t = inputs::parse_metadata(parts["metadata"]); !t) report("metadata", metadata_path, t.error());
        if (!ok) return kExitUsage;

        GatewayClient client(cfg.server_url);
        auto reply = client.post_analysis(parts);
        if (!reply) {
            err_ << "error: " << reply.error() << "\n";
            return kExitUsage;
        }
        if (reply->status != 202) {
            err_ << "error: " << server_error(*reply) << "\n";
            try {
                for (const auto& e : json::parse(reply->body).value("errors", json::array()))
                    err_ << "  " << e.value("part", "") << ": " << e.value("description", "") << "\n";
            } catch (...) {
            }
            return kExitUsage;
        }
        const auto accepted = json::parse(reply->body);
        const auto id = accepted.at("correlation_id").get<std::string>();
        if (cfg.format == OutputFormat::document && !wait) out_ << accepted.dump(2) << "\n";
        else if (cfg.format == OutputFormat::table) out_ << "correlation_id: " << id << "\n";
        if (!wait) return kExitOk;

        const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(cfg.timeout_ms);
        std::string stage = "requested";
        for (;;) {
            auto st = client.get("/analyses/" + id);
            if (!st) {
                err_ << "error: " << st.error() << "\n";
                return kExitUsage;
            }
            if (st->status != 200) {
                err_ << "error: " << server_error(*st) << "\n";
                return kExitUsage;
            }
            auto view = json::parse(st->body);
            stage = view.value("stage", "");
            if (stage == "persisted" || stage == "failed") {
                out_ << render_status(view, cfg.format);
                return stage == "persisted" ? kExitOk : kExitPipelineFailed;
            }
            if (std::chrono::steady_clock::now() >= deadline) break;
            std::this_thread::sleep_for(std::chrono::milliseconds(cfg.poll_interval_ms));
        }
        err_ << "error: timed out after " << cfg.timeout_ms << " ms waiting for " << id << " (last stage: " << stage
             << ")\n";
        return kExitTimeout;
    }

    int query(const std::string& path, const std::multimap<std::string, std::string>& params,
              std::string (*render)(const json&, OutputFormat)) {
        GatewayClient client(cfg.server_url);
        auto reply = client.get(path, params);
        if (!reply) {
            err_ << "error: " << reply.error() << "\n";
            return kExitUsage;
        }
        if (reply->status != 200) {
            err_ << "error: " << server_error(*reply) << "\n";
            return kExitUsage;
        }
        try {
            out_ << render(json::parse(reply->body), cfg.format);
        } catch (const std::exception& e) {
            err_ << "error: unexpected response: " << e.what() << "\n";
            return kExitUsage;
        }
        return kExitOk;
    }

    int serve(gateway::ServerConfig sc) {
        sigset_t signals;
        sigemptyset(&signals);
        sigaddset(&signals, SIGINT);
        sigaddset(&signals, SIGTERM);
        pthread_sigmask(SIG_BLOCK, &signals, nullptr);

        services::Platform::Options opts;
        opts.store_dir = sc.store_dir;
        auto platform = services::Platform::create(opts);
        if (!platform) {
            err_ << "error: " << platform.error() << "\n";
            return kExitUsage;
        }
        gateway::HttpServer server(**platform, sc);
        auto port = server.bind();
        if (!port) {
            err_ << "error: cannot listen on " << sc.host << ":" << sc.port << "\n";
            return kExitUsage;
        }
        out_ << "listening on http://" << sc.host << ":" << *port << std::endl;

        std::atomic<bool> done{false};
        std::thread watcher([&] {
            timespec tick{0, 200'000'000};
            while (!done) {
                if (sigtimedwait(&signals, nullptr, &tick) > 0) {
                    server.stop();
                    return;
                }
            }
        });
        const bool ok = server.listen();
        done = true;
        watcher.join();
        server.drain();
        out_ << "stopped" << std::endl;
        return ok ? kExitOk : kExitUsage;
    }

    int export_store(const std::string& dir) {
        auto store = store::ContextStore::open(dir);
        if (!store) {
            err_ << "error: " << store.error().message << "\n";
            return kExitUsage;
        }
        out_ << (*store)->export_document() << "\n";
        return kExitOk;
    }

    CliConfig cfg;

private:
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Commands cmds(out, err);
    CLI::App app{"smellhunter: submit SmellDSL analyses and explore detected smells"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string server, format, config_path;
    std::optional<int> poll_ms, timeout_ms;
    app.add_option("--server", server, "Gateway URL (env SMELLHUNTER_SERVER)");
    app.add_option("--format", format, "Output: table or document")->check(CLI::IsMember({"table", "document"}));
    app.add_option("--config", config_path, "JSON config file (env SMELLHUNTER_CONFIG)");
    app.add_option("--poll-interval-ms", poll_ms, "Status polling interval");
    app.add_option("--timeout-ms", timeout_ms, "Give up waiting after this long");

    std::string script, metrics, thresholds, metadata, label;
    bool wait = false;
    auto* analyze = app.add_subcommand("analyze", "Submit an analysis request");
    analyze->add_option("--script", script, "SmellDSL script")->required();
    analyze->add_option("--metrics", metrics, "Metric table (CSV)")->required();
    analyze->add_option("--thresholds", thresholds, "Threshold configuration")->required();
    analyze->add_option("--metadata", metadata, "Context metadata")->required();
    analyze->add_option("--label", label, "Script name shown in history");
    analyze->add_flag("--wait", wait, "Poll until the run finishes");

    Filters det_f, hist_f;
    auto* detections = app.add_subcommand("detections", "List detected smells");
    add_filter_options(detections, det_f);
    detections->add_option("--offset", det_f.offset, "Skip this many records");
    detections->add_option("--limit", det_f.limit, "Page size (1-1000)");

    auto* histogram = app.add_subcommand("histogram", "Count detections per smell");
    add_filter_options(histogram, hist_f);

    std::string hist_project;
    std::size_t hist_offset = 0, hist_limit = 100;
    auto* history = app.add_subcommand("history", "Show execution history");
    history->add_option("--project", hist_project, "Project id");
    history->add_option("--offset", hist_offset, "Skip this many records");
    history->add_option("--limit", hist_limit, "Page size (1-1000)");

    std::string trace_id;
    auto* trace = app.add_subcommand("trace", "Show the pipeline events of one run");
    trace->add_option("correlation_id", trace_id, "Correlation id")->required();

    gateway::ServerConfig sc;
    std::string listen;
    std::string store_dir, static_dir;
    std::optional<std::size_t> payload_limit, pipeline_timeout;
    auto* serve = app.add_subcommand("serve", "Run the pipeline and HTTP gateway");
    serve->add_option("--listen", listen, "host:port (env SMELLHUNTER_LISTEN)");
    serve->add_option("--store", store_dir, "Store directory; in-memory when omitted (env SMELLHUNTER_STORE)");
    serve->add_option("--static", static_dir, "Dashboard assets directory (env SMELLHUNTER_STATIC)");
    serve->add_option("--payload-limit", payload_limit, "Max upload bytes (env SMELLHUNTER_PAYLOAD_LIMIT)");
    serve->add_option("--pipeline-timeout-ms", pipeline_timeout, "(env SMELLHUNTER_PIPELINE_TIMEOUT_MS)");

    std::string export_dir;
    auto* exporter = app.add_subcommand("export", "Dump a store directory as one document");
    exporter->add_option("--store", export_dir, "Store directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    auto& cfg = cmds.cfg;
    if (config_path.empty())
        if (const char* v = std::getenv("SMELLHUNTER_CONFIG")) config_path = v;
    if (!config_path.empty())
        if (auto e = load_config_file(config_path, cfg)) {
            err << "error: " << *e << "\n";
            return kExitUsage;
        }
    if (const char* v = std::getenv("SMELLHUNTER_SERVER")) cfg.server_url = v;
    if (!server.empty()) cfg.server_url = server;
    if (format == "document") cfg.format = OutputFormat::document;
    else if (format == "table") cfg.format = OutputFormat::table;
    if (poll_ms) cfg.poll_interval_ms = *poll_ms;
    if (timeout_ms) cfg.timeout_ms = *timeout_ms;
    if (cfg.poll_interval_ms <= 0 || cfg.timeout_ms <= 0 || cfg.poll_interval_ms >= cfg.timeout_ms) {
        err << "error: need 0 < poll interval < timeout\n";
        return kExitUsage;
    }

    if (*analyze) return cmds.analyze(script, metrics, thresholds, metadata, label, wait);

    if (*detections || *histogram) {
        const Filters& f = *detections ? det_f : hist_f;
        std::multimap<std::string, std::string> params;
        if (auto e = filter_params(f, params)) {
            err << "error: " << *e << "\n";
            return kExitUsage;
        }
        if (*detections) {
            params.emplace("offset", std::to_string(f.offset));
            params.emplace("limit", std::to_string(f.limit));
            return cmds.query("/detections", params, render_detections);
        }
        return cmds.query("/detections/histogram", params, render_histogram);
    }

    if (*history) {
        std::multimap<std::string, std::string> params{{"offset", std::to_string(hist_offset)},
                                                       {"limit", std::to_string(hist_limit)}};
        if (!hist_project.empty()) params.emplace("project", hist_project);
        return cmds.query("/executions", params, render_history);
    }

    if (*trace) return cmds.query("/analyses/" + trace_id + "/trace", {}, render_trace);

    if (*serve) {
        auto env = gateway::apply_env(sc);
        if (!env) {
            err << "error: " << env.error() << "\n";
            return kExitUsage;
        }
        sc = *env;
        if (!listen.empty()) {
            auto colon = listen.rfind(':');
            if (colon == std::string::npos) {
                err << "error: --listen expects host:port\n";
                return kExitUsage;
            }
            sc.host = listen.substr(0, colon);
            try {
                sc.port = std::stoi(listen.substr(colon + 1));
            } catch (...) {
                err << "error: invalid port in --listen\n";
                return kExitUsage;
            }
        }
        if (!store_dir.empty()) sc.store_dir = store_dir;
        if (!static_dir.empty()) sc.static_dir = static_dir;
        if (payload_limit) sc.payload_limit = *payload_limit;
        if (pipeline_timeout) sc.pipeline_timeout = std::chrono::milliseconds(*pipeline_timeout);
        return cmds.serve(sc);
    }

    if (*exporter) return cmds.export_store(export_dir);
    return kExitUsage;
}

}  // namespace smellhunter::cli
