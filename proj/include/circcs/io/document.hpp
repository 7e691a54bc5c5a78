#ifndef CIRCCS_IO_DOCUMENT_HPP
#define CIRCCS_IO_DOCUMENT_HPP

// One-document-per-file JSON serialization for the command-line tool.
//
//   { "format": "circcs", "version": 1, "kind": "<kind>",
//     "payload": { ... }, "meta": { ... } }
//
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces every value bit for bit and identical inputs give byte-identical
// files.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "circcs/core.hpp"

namespace circcs::io {

using json = nlohmann::json;

enum class DocKind { Signal, Seed, Measurements, Wavelet, Estimate, Ensemble };

inline std::string_view to_string(DocKind k) {
  switch (k) {
    case DocKind::Signal: return "signal";
    case DocKind::Seed: return "seed";
    case DocKind::Measurements: return "measurements";
    case DocKind::Wavelet: return "wavelet";
    case DocKind::Estimate: return "estimate";
    case DocKind::Ensemble: return "ensemble";
  }
  return "unknown";
}

inline DocKind kind_from_string(std::string_view s) {
  for (DocKind k : {DocKind::Signal, DocKind::Seed, DocKind::Measurements, DocKind::Wavelet,
                    DocKind::Estimate, DocKind::Ensemble}) {
    if (to_string(k) == s) return k;
  }
  throw ValidationError("document: unknown kind '" + std::string(s) + "'");
}

struct Document {
  DocKind kind = DocKind::Signal;
  json payload = json::object();
  json meta = json::object();
};

inline std::string dump(const Document& doc) {
  json j;
  j["format"] = "circcs";
  j["version"] = 1;
  j["kind"] = to_string(doc.kind);
  j["payload"] = doc.payload;
  j["meta"] = doc.meta;
  return j.dump(2) + "\n";
}

inline Document parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("document: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "circcs") {
    throw ValidationError("document: not a circcs document");
  }
  if (j.value("version", 0) != 1) throw ValidationError("document: unsupported version");
  Document doc;
  doc.kind = kind_from_string(j.at("kind").get<std::string>());
  doc.payload = j.value("payload", json::object());
  doc.meta = j.value("meta", json::object());
  return doc;
}

inline void write_file(const std::string& path, const Document& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << dump(doc);
  if (!out) throw ValidationError("failed writing '" + path + "'");
}

inline Document read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

inline Document expect(Document doc, DocKind kind) {
  if (doc.kind != kind) {
    throw ValidationError("expected a " + std::string(to_string(kind)) + " document, got " +
                          std::string(to_string(doc.kind)));
  }
  return doc;
}

namespace detail {

inline std::vector<double> doubles(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ValidationError(std::string("document: payload.") + key + " must be an array");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw ValidationError(std::string("document: payload.") + key + " has a non-number");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Typed conversions

inline Document to_document(const Signal& x) {
  Document d{DocKind::Signal};
  d.payload["data"] = x.values();
  d.meta["n"] = x.size();
  return d;
}

inline Signal signal_from(const Document& doc) {
  return Signal(detail::doubles(expect(doc, DocKind::Signal).payload, "data"));
}

inline Document to_document(const Seed& s) {
  Document d{DocKind::Seed};
  d.payload["data"] = s.values();
  d.meta["n"] = s.size();
  if (!s.label().empty()) d.meta["label"] = s.label();
  return d;
}

inline Seed seed_from(const Document& doc) {
  const Document d = expect(doc, DocKind::Seed);
  return Seed(detail::doubles(d.payload, "data"), d.meta.value("label", ""));
}

/// Measurements carry their mask in the payload and the 1-based corrupted
/// positions in meta.corruption so consumers never pick up invalid entries
/// unknowingly.
inline Document to_document(const MaskedMeasurements& y, json meta = json::object()) {
  Document d{DocKind::Measurements};
  d.payload["data"] = y.values();
  d.payload["valid"] = y.mask().values();
  d.meta = std::move(meta);
  d.meta["m"] = y.size();
  d.meta["corruption"] = y.mask().invalid_indices();
  if (y.seed_ref()) d.meta["seed_label"] = *y.seed_ref();
  if (y.warning()) d.meta["warning"] = *y.warning();
  return d;
}

inline MaskedMeasurements measurements_from(const Document& doc) {
  const Document d = expect(doc, DocKind::Measurements);
  auto data = detail::doubles(d.payload, "data");
  std::vector<bool> valid(data.size(), true);
  if (d.payload.contains("valid")) {
    const auto& v = d.payload.at("valid");
    if (!v.is_array() || v.size() != data.size()) {
      throw DimensionError("document: payload.valid must match payload.data in length");
    }
    for (std::size_t i = 0; i < v.size(); ++i) valid[i] = v[i].get<bool>();
  }
  std::optional<std::string> ref;
  if (d.meta.contains("seed_label")) ref = d.meta.at("seed_label").get<std::string>();
  MaskedMeasurements y(std::move(data), ValidityMask(std::move(valid)), ref);
  if (d.meta.contains("warning")) y = y.with_warning(d.meta.at("warning").get<std::string>());
  return y;
}

inline Document to_document(const WaveletCoefficients& w) {
  Document d{DocKind::Wavelet};
  d.payload["data"] = w.values();
  d.meta["n"] = w.size();
  d.meta["interleave"] = "low at odd 1-based positions, high at even";
  return d;
}

}  // namespace circcs::io

#endif  // CIRCCS_IO_DOCUMENT_HPP
