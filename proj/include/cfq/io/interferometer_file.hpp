#pragma once

// Interferometer description documents.
//
//   {
//     "dim": 3,
//     "elements": [{"i": 0, "j": 1, "theta": 0.785398, "phi": 0}, ...],
//     "tagged_paths": [{"name": "F", "stage": 3, "mode": 0}, ...],
//     "input": [[0.57735, 0], [0.57735, 0], [0.57735, 0]],
//     "input_labels": ["1", "2", "3"],      (optional)
//     "output_labels": ["1", "2", "3"]      (optional)
//   }
//
// JSON documents are read with a YAML parser (YAML is a superset of JSON),
// which keeps a source position on every node so errors can name a line.
// Unknown fields are rejected.

#include <cmath>
#include <complex>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "cfq/errors.hpp"
#include "cfq/hilbert.hpp"
#include "cfq/network.hpp"

namespace cfq::io {

/// Malformed description document; `line` and `column` are 1-based.
class InputError : public Error {
public:
    InputError(const std::string& source, int line, int column, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct InterferometerDocument {
    InterferometerSpec spec;
    std::vector<Amplitude> input;
};

namespace detail {

class DocumentReader {
public:
    explicit DocumentReader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
        const YAML::Mark m = at.Mark();
        throw InputError(source_, m.line + 1, m.column + 1, what);
    }

    void require_map(const YAML::Node& n, const std::string& what,
                     const std::set<std::string>& allowed, const std::set<std::string>& required) const {
        if (!n.IsMap()) fail(n, what + " must be an object");
        for (const auto& kv : n) {
            const auto key = kv.first.as<std::string>();
            if (!allowed.count(key)) fail(kv.first, "unknown field '" + key + "' in " + what);
        }
        for (const auto& r : required) {
            if (!n[r]) fail(n, what + " is missing required field '" + r + "'");
        }
    }

    double real(const YAML::Node& n, const std::string& what) const {
        if (!n.IsScalar()) fail(n, what + " must be a number");
        try {
            return n.as<double>();
        } catch (const YAML::Exception&) {
            fail(n, what + " must be a number, got '" + n.Scalar() + "'");
        }
    }

    std::size_t index(const YAML::Node& n, const std::string& what) const {
        if (!n.IsScalar()) fail(n, what + " must be a non-negative integer");
        try {
            const long long v = n.as<long long>();
            if (v < 0) fail(n, what + " must be a non-negative integer");
            return static_cast<std::size_t>(v);
        } catch (const YAML::Exception&) {
            fail(n, what + " must be a non-negative integer, got '" + n.Scalar() + "'");
        }
    }

    std::string text(const YAML::Node& n, const std::string& what) const {
        if (!n.IsScalar()) fail(n, what + " must be a string");
        return n.Scalar();
    }

    std::vector<std::string> labels(const YAML::Node& n, const std::string& what, std::size_t dim) const {
        if (!n.IsSequence()) fail(n, what + " must be a list of strings");
        if (n.size() != dim) fail(n, what + " must have exactly dim = " + std::to_string(dim) + " entries");
        std::vector<std::string> out;
        for (const auto& l : n) out.push_back(text(l, what + " entry"));
        return out;
    }

    InterferometerDocument read(const YAML::Node& root) const {
        require_map(root, "document", {"dim", "elements", "tagged_paths", "input", "input_labels", "output_labels"},
                    {"dim", "elements", "tagged_paths", "input"});
        InterferometerDocument doc;
        auto& spec = doc.spec;
        spec.dim = index(root["dim"], "dim");
        if (spec.dim == 0) fail(root["dim"], "dim must be positive");

        const YAML::Node elements = root["elements"];
        if (!elements.IsSequence()) fail(elements, "elements must be a list");
        for (const auto& e : elements) {
            require_map(e, "element", {"i", "j", "theta", "phi"}, {"i", "j", "theta", "phi"});
            BeamsplitterElement el{index(e["i"], "element i"), index(e["j"], "element j"),
                                   real(e["theta"], "element theta"), real(e["phi"], "element phi")};
            if (el.mode_i >= spec.dim || el.mode_j >= spec.dim) fail(e, "element mode index outside dim");
            if (el.mode_i == el.mode_j) fail(e, "element must act on two distinct modes");
            spec.elements.push_back(el);
        }

        const YAML::Node paths = root["tagged_paths"];
        if (!paths.IsSequence()) fail(paths, "tagged_paths must be a list");
        std::set<std::string> names;
        for (const auto& p : paths) {
            require_map(p, "tagged path", {"name", "stage", "mode"}, {"name", "stage", "mode"});
            TaggedPathSpec t{text(p["name"], "path name"), index(p["stage"], "path stage"),
                             index(p["mode"], "path mode")};
            if (t.name.empty()) fail(p["name"], "path name must be non-empty");
            if (!names.insert(t.name).second) fail(p["name"], "duplicate path name '" + t.name + "'");
            if (t.stage > spec.elements.size()) {
                fail(p["stage"], "stage " + std::to_string(t.stage) + " beyond the " +
                                     std::to_string(spec.elements.size()) + " elements");
            }
            if (t.mode >= spec.dim) fail(p["mode"], "mode outside dim");
            spec.tagged_paths.push_back(std::move(t));
        }

        const YAML::Node input = root["input"];
        if (!input.IsSequence()) fail(input, "input must be a list of [re, im] pairs");
        if (input.size() != spec.dim) fail(input, "input must have exactly dim = " + std::to_string(spec.dim) + " amplitudes");
        double norm2 = 0.0;
        for (const auto& amp : input) {
            if (!amp.IsSequence() || amp.size() != 2) fail(amp, "amplitude must be a [re, im] pair");
            const Amplitude z{real(amp[0], "amplitude re"), real(amp[1], "amplitude im")};
            norm2 += std::norm(z);
            doc.input.push_back(z);
        }
        if (!(norm2 > tol::zero_vector * tol::zero_vector)) fail(input, "input amplitudes are all zero");

        if (root["input_labels"]) spec.input_labels = labels(root["input_labels"], "input_labels", spec.dim);
        if (root["output_labels"]) {
            spec.output_labels = labels(root["output_labels"], "output_labels", spec.dim);
            std::set<std::string> seen(spec.output_labels.begin(), spec.output_labels.end());
            if (seen.size() != spec.dim) fail(root["output_labels"], "output_labels must be distinct");
        }
        return doc;
    }

private:
    std::string source_;
};

}  // namespace detail

/// Parses a description document; `source` is used in error messages.
inline InterferometerDocument parse_interferometer(const std::string& text, const std::string& source = "<input>") {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw InputError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
    return detail::DocumentReader(source).read(root);
}

inline InterferometerDocument load_interferometer(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path, 0, 0, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_interferometer(ss.str(), path);
}

}  // namespace cfq::io
