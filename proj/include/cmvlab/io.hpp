#pragma once

// JSON and CSV plumbing. Doubles are always written as %.17g so identical
// runs give byte-identical files; JSON key order is insertion order.
//
// Sequence record:
//   {"kind": "random" | "constant" | "explicit" | "quasi_periodic",
//    "two_sided": bool,
//    random:          "seed", "radius"
//    constant:        "value": [re, im]
//    explicit:        "values": [[re, im], ...], "first_index"
//    quasi_periodic:  "lambda", "omega", "x", "h": {"winding", "constant", "cos", "sin"}
//    optional:        "rotations": [[re, im], ...],
//                     "overrides": [{"index", "value": [re, im], "depth"}, ...]}
//
// Config record: {"sequence": {...}, "grid": {"x": G, "z": K},
//                 "schedule": [n, ...], "tolerances": {"name": value, ...}}

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "cmvlab/coefficients.hpp"
#include "cmvlab/errors.hpp"
#include "cmvlab/polynomial.hpp"

namespace cmvlab {

using json = nlohmann::ordered_json;

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_json(std::ostream& out, const json& j, int indent, int depth) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string close_pad(std::size_t(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out << ',' << nl;
        first = false;
        out << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(out, it.value(), indent, depth + 1);
      }
      out << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat || indent == 0) {
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out << (indent > 0 ? ", " : ",");
          write_json(out, j[i], 0, 0);
        }
        out << ']';
        return;
      }
      out << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ',' << nl;
        out << pad;
        write_json(out, j[i], indent, depth + 1);
      }
      out << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v))
        out << format_double(v);
      else
        out << "null";
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace detail

inline std::string to_json_text(const json& j, int indent = 2) {
  std::ostringstream out;
  detail::write_json(out, j, indent, 0);
  out << '\n';
  return out.str();
}

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw ArgumentError("expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json polynomial_to_json(const ComplexPolynomial& p) {
  json arr = json::array();
  for (const auto& c : p.coefficients()) arr.push_back(complex_to_json(c));
  return arr;
}

inline json phase_to_json(const PhaseFunction& h) {
  json j;
  j["winding"] = h.winding;
  j["constant"] = h.constant;
  j["cos"] = h.cos_terms;
  j["sin"] = h.sin_terms;
  return j;
}

inline PhaseFunction phase_from_json(const json& j) {
  PhaseFunction h;
  h.winding = j.value("winding", 1);
  h.constant = j.value("constant", 0.0);
  h.cos_terms = j.value("cos", std::vector<double>{});
  h.sin_terms = j.value("sin", std::vector<double>{});
  return h;
}

inline json sequence_to_json(const VerblunskySequence& seq) {
  json j;
  std::visit(
      [&j](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, RandomGenerator>) {
          j["kind"] = "random";
          j["seed"] = g.seed;
          j["radius"] = g.radius;
        } else if constexpr (std::is_same_v<G, ConstantGenerator>) {
          j["kind"] = "constant";
          j["value"] = complex_to_json(g.value);
        } else if constexpr (std::is_same_v<G, ExplicitGenerator>) {
          j["kind"] = "explicit";
          j["first_index"] = g.first_index;
          json values = json::array();
          for (const auto& v : g.values) values.push_back(complex_to_json(v));
          j["values"] = values;
        } else {
          j["kind"] = "quasi_periodic";
          j["lambda"] = g.lambda;
          j["omega"] = g.omega;
          j["x"] = g.x;
          j["h"] = phase_to_json(g.h);
        }
      },
      seq.generator());
  j["two_sided"] = seq.two_sided();
  if (!seq.rotations().empty()) {
    json rot = json::array();
    for (const auto& r : seq.rotations()) rot.push_back(complex_to_json(r));
    j["rotations"] = rot;
  }
  if (!seq.overrides().empty()) {
    json ov = json::array();
    for (const auto& o : seq.overrides())
      ov.push_back(json{{"index", o.index}, {"value", complex_to_json(o.value)}, {"depth", o.depth}});
    j["overrides"] = ov;
  }
  return j;
}

inline VerblunskySequence sequence_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ArgumentError("sequence: missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  const bool two_sided = j.value("two_sided", false);
  std::optional<VerblunskySequence> base;
  if (kind == "random") {
    base = VerblunskySequence::random(j.at("seed").get<std::uint64_t>(), j.value("radius", 0.95), two_sided);
  } else if (kind == "constant") {
    base = VerblunskySequence::constant(complex_from_json(j.at("value")), two_sided);
  } else if (kind == "explicit") {
    std::vector<cplx> values;
    for (const auto& v : j.at("values")) values.push_back(complex_from_json(v));
    base = VerblunskySequence::explicit_values(std::move(values), j.value("first_index", std::int64_t{0}));
  } else if (kind == "quasi_periodic") {
    const PhaseFunction h = j.contains("h") ? phase_from_json(j.at("h")) : PhaseFunction::linear();
    base = VerblunskySequence::quasi_periodic(j.at("lambda").get<double>(), h, j.at("omega").get<double>(),
                                              j.value("x", 0.0), two_sided);
  } else {
    throw ArgumentError("sequence: unknown kind \"" + kind + "\"");
  }
  // Replay rotations and overrides in the order they were recorded.
  std::vector<cplx> rotations;
  if (j.contains("rotations"))
    for (const auto& r : j.at("rotations")) rotations.push_back(complex_from_json(r));
  struct Pending {
    std::int64_t index;
    cplx value;
    std::size_t depth;
  };
  std::vector<Pending> pending;
  if (j.contains("overrides"))
    for (const auto& o : j.at("overrides"))
      pending.push_back({o.at("index").get<std::int64_t>(), complex_from_json(o.at("value")),
                         std::min(o.value("depth", std::size_t{0}), rotations.size())});
  VerblunskySequence seq = *base;
  for (std::size_t d = 0; d <= rotations.size(); ++d) {
    for (const auto& p : pending)
      if (p.depth == d) seq = seq.with_override(p.index, p.value);
    if (d < rotations.size()) seq = rotate_sequence(seq, rotations[d]);
  }
  return seq;
}

inline json family_to_json(const QuasiPeriodicFamily& f) {
  json j;
  j["kind"] = "quasi_periodic";
  j["lambda"] = f.lambda;
  j["omega"] = f.omega;
  j["h"] = phase_to_json(f.h);
  return j;
}

/// The quasi-periodic family behind a sequence record, with its phase x.
inline std::pair<QuasiPeriodicFamily, double> family_from_json(const json& j) {
  const auto seq = sequence_from_json(j);
  const auto* g = std::get_if<QuasiPeriodicGenerator>(&seq.generator());
  if (!g) throw ArgumentError("sequence: a quasi-periodic record is required here");
  return {QuasiPeriodicFamily{g->lambda, g->h, g->omega}, g->x};
}

struct RunConfig {
  std::optional<json> sequence;
  std::optional<std::size_t> x_grid;
  std::optional<std::size_t> z_grid;
  std::vector<int> schedule;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& name, double fallback) const {
    const auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

/// Accepts either a full config record or a bare sequence record.
inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  if (j.contains("kind")) {
    c.sequence = j;
    return c;
  }
  if (j.contains("sequence")) c.sequence = j.at("sequence");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("x")) c.x_grid = g.at("x").get<std::size_t>();
    if (g.contains("z")) c.z_grid = g.at("z").get<std::size_t>();
  }
  if (j.contains("schedule")) c.schedule = j.at("schedule").get<std::vector<int>>();
  if (j.contains("tolerances"))
    for (auto it = j.at("tolerances").begin(); it != j.at("tolerances").end(); ++it)
      c.tolerances[it.key()] = it.value().get<double>();
  return c;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path);
  out << text;
}

/// Comma-separated, header row, '.' decimals, LF endings.
class CsvWriter {
 public:
  using Cell = std::variant<double, std::int64_t, std::string>;

  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) { emit(header); }

  void row(const std::vector<Cell>& cells) {
    if (cells.size() != columns_) throw ArgumentError("csv: row width does not match header");
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (const auto& c : cells) {
      if (const auto* d = std::get_if<double>(&c))
        text.push_back(std::isfinite(*d) ? format_double(*d) : (std::isnan(*d) ? "nan" : (*d > 0 ? "inf" : "-inf")));
      else if (const auto* i = std::get_if<std::int64_t>(&c))
        text.push_back(std::to_string(*i));
      else
        text.push_back(std::get<std::string>(c));
    }
    emit(text);
  }

  const std::string& str() const { return buffer_; }

 private:
  void emit(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) buffer_ += ',';
      buffer_ += cells[i];
    }
    buffer_ += '\n';
  }

  std::size_t columns_;
  std::string buffer_;
};

}  // namespace cmvlab
