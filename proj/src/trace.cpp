#include "ipp/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ipp/rng.hpp"
#include "ipp/text.hpp"

namespace ipp {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "ipp-trace";

json vec(const Vec2& p) { return json::array({p.x(), p.y()}); }
Vec2 vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json step_json(const StepRecord& s) {
  json targets = json::array();
  for (const auto& t : s.targets) targets.push_back({{"id", t.id}, {"p", vec(t.position)}});
  json dets = json::array();
  for (const auto& d : s.detections) {
    dets.push_back({{"p", vec(d.position)}, {"id", d.true_target_id}, {"r", d.range}});
  }
  return {{"type", "step"},
          {"t", s.t},
          {"asv", {s.asv.x, s.asv.y, s.asv.psi}},
          {"wind", {s.wind.speed, s.wind.dir}},
          {"targets", targets},
          {"detections", dets},
          {"H", s.metrics.H},
          {"mse", s.metrics.mse},
          {"n_step", s.metrics.n_step},
          {"nbar", s.metrics.mean_detections},
          {"replanned", s.replanned}};
}

StepRecord step_from(const json& j) {
  StepRecord s;
  s.t = j.at("t").get<double>();
  const auto& a = j.at("asv");
  s.asv = {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
  s.wind = {j.at("wind").at(0).get<double>(), j.at("wind").at(1).get<double>()};
  for (const auto& t : j.at("targets")) s.targets.push_back({t.at("id").get<int>(), vec(t.at("p"))});
  for (const auto& d : j.at("detections")) {
    s.detections.push_back({vec(d.at("p")), d.at("id").get<int>(), d.at("r").get<double>()});
  }
  s.metrics = {s.t, j.at("H").get<double>(), j.at("mse").get<double>(),
               j.at("n_step").get<int>(), j.at("nbar").get<double>()};
  s.replanned = j.at("replanned").get<bool>();
  return s;
}

json decision_json(const PlannerDecision& d) {
  json cands = json::array();
  for (const auto& c : d.candidates) {
    cands.push_back({{"index", c.index},
                     {"dh", c.heading_change},
                     {"entropy", c.utility.entropy_term},
                     {"tracking", c.utility.tracking_term},
                     {"w", c.utility.w},
                     {"total", c.utility.total}});
  }
  return {{"type", "decision"}, {"t", d.t}, {"chosen", d.chosen}, {"candidates", cands}};
}

PlannerDecision decision_from(const json& j) {
  PlannerDecision d;
  d.t = j.at("t").get<double>();
  d.chosen = j.at("chosen").get<int>();
  for (const auto& c : j.at("candidates")) {
    d.candidates.push_back({c.at("index").get<int>(),
                            c.at("dh").get<double>(),
                            {c.at("entropy").get<double>(), c.at("tracking").get<double>(),
                             c.at("w").get<double>(), c.at("total").get<double>()}});
  }
  return d;
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<MetricSample> EpisodeTrace::metrics() const {
  std::vector<MetricSample> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.metrics);
  return out;
}

std::string serialize_trace(const EpisodeTrace& trace) {
  std::string out;
  auto line = [&](const json& j) {
    out += j.dump();
    out += '\n';
  };
  line({{"format", kFormat},
        {"version", kTraceVersion},
        {"config_hash", hex64(trace.config_hash)},
        {"seed", trace.seed},
        {"planner", trace.planner},
        {"rows", trace.rows},
        {"cols", trace.cols}});
  for (const auto& s : trace.steps) line(step_json(s));
  for (const auto& s : trace.snapshots) {
    line({{"type", "snapshot"},
          {"t", s.t},
          {"rows", s.raster.rows},
          {"cols", s.raster.cols},
          {"p", s.raster.values}});
  }
  for (const auto& d : trace.decisions) line(decision_json(d));
  line({{"type", "end"},
        {"steps", trace.steps.size()},
        {"snapshots", trace.snapshots.size()},
        {"decisions", trace.decisions.size()}});
  return out;
}

EpisodeTrace parse_trace(const std::string& text) {
  EpisodeTrace trace;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool header = false;
  bool ended = false;
  std::string last = "header";

  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty()) continue;
    if (ended) throw TraceError("line " + std::to_string(lineno) + ": data after end record");
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error&) {
      throw TraceError("line " + std::to_string(lineno) + ": incomplete or corrupt " +
                       (header ? "record after " + last : std::string("header")) + " record");
    }
    try {
      if (!header) {
        if (!j.is_object() || j.value("format", "") != kFormat) {
          throw TraceError("line 1: not an ipp trace");
        }
        const int version = j.at("version").get<int>();
        if (version != kTraceVersion) {
          throw TraceError("unsupported trace version " + std::to_string(version) +
                           " (expected " + std::to_string(kTraceVersion) + ")");
        }
        const std::string hash = j.at("config_hash").get<std::string>();
        trace.config_hash = std::stoull(hash, nullptr, 16);
        trace.seed = j.at("seed").get<std::uint64_t>();
        trace.planner = j.at("planner").get<std::string>();
        trace.rows = j.at("rows").get<int>();
        trace.cols = j.at("cols").get<int>();
        header = true;
        continue;
      }
      const std::string type = j.at("type").get<std::string>();
      last = type;
      if (type == "step") {
        StepRecord s = step_from(j);
        if (!trace.steps.empty() && !(s.t > trace.steps.back().t)) {
          throw TraceError("step times not increasing");
        }
        trace.steps.push_back(std::move(s));
      } else if (type == "snapshot") {
        GridSnapshot s;
        s.t = j.at("t").get<double>();
        s.raster.rows = j.at("rows").get<int>();
        s.raster.cols = j.at("cols").get<int>();
        s.raster.values = j.at("p").get<std::vector<double>>();
        if (s.raster.rows != trace.rows || s.raster.cols != trace.cols ||
            s.raster.values.size() != static_cast<std::size_t>(s.raster.rows) * s.raster.cols) {
          throw TraceError("snapshot geometry does not match the header");
        }
        trace.snapshots.push_back(std::move(s));
      } else if (type == "decision") {
        trace.decisions.push_back(decision_from(j));
      } else if (type == "end") {
        if (j.at("steps").get<std::size_t>() != trace.steps.size() ||
            j.at("snapshots").get<std::size_t>() != trace.snapshots.size() ||
            j.at("decisions").get<std::size_t>() != trace.decisions.size()) {
          throw TraceError("record counts do not match the end record");
        }
        ended = true;
      } else {
        throw TraceError("unknown record type '" + type + "'");
      }
    } catch (const TraceError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0 || msg.rfind("unsupported", 0) == 0) throw;
      throw TraceError("line " + std::to_string(lineno) + ": " + msg);
    } catch (const json::exception& e) {
      throw TraceError("line " + std::to_string(lineno) + ": malformed " + last + " record (" +
                       e.what() + ")");
    } catch (const std::logic_error& e) {
      throw TraceError("line " + std::to_string(lineno) + ": malformed " + last + " record");
    }
  }
  if (!header) throw TraceError("empty trace");
  if (!ended) {
    throw TraceError("trace truncated after line " + std::to_string(lineno) + " (last record: " +
                     last + "); missing end record");
  }
  return trace;
}

void write_trace(const std::filesystem::path& path, const EpisodeTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot write " + path.string());
  out << serialize_trace(trace);
}

EpisodeTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_trace(ss.str());
}

std::uint64_t checksum(const EpisodeTrace& trace) { return fnv1a64(serialize_trace(trace)); }

void write_decisions_csv(std::ostream& os, const std::vector<PlannerDecision>& decisions) {
  os << "t,candidate,heading_change,entropy_term,tracking_term,w,total,chosen,eval_ms\n";
  for (const auto& d : decisions) {
    if (d.candidates.empty()) {
      os << format_double(d.t) << ",,,,,,,-1," << format_double(d.eval_ms) << '\n';
      continue;
    }
    for (const auto& c : d.candidates) {
      os << format_double(d.t) << ',' << c.index << ',' << format_double(c.heading_change) << ','
         << format_double(c.utility.entropy_term) << ',' << format_double(c.utility.tracking_term)
         << ',' << format_double(c.utility.w) << ',' << format_double(c.utility.total) << ','
         << (c.index == d.chosen ? 1 : 0) << ',' << format_double(d.eval_ms) << '\n';
    }
  }
}

}  // namespace ipp
