#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "framelab/errors.hpp"
#include "framelab/frame.hpp"

namespace framelab {

using Json = nlohmann::ordered_json;

/// Frame file schema:
///   { "field": "real"|"complex", "n": N, "m": M, "entries": [[...row-major...]] }
/// with complex entries written as two-element arrays [re, im].
inline Json frame_to_json(const Frame& frame) {
    Json j;
    j["field"] = to_string(frame.field());
    j["n"] = frame.n_dim();
    j["m"] = frame.n_vecs();
    Json rows = Json::array();
    for (int i = 0; i < frame.n_dim(); ++i) {
        Json row = Json::array();
        for (int jcol = 0; jcol < frame.n_vecs(); ++jcol) {
            const Complex z = frame.entries()(i, jcol);
            if (frame.field() == ScalarField::Real) {
                row.push_back(z.real());
            } else {
                row.push_back(Json::array({z.real(), z.imag()}));
            }
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

inline Frame frame_from_json(const Json& j) {
    try {
        const std::string field_str = j.at("field").get<std::string>();
        ScalarField field;
        if (field_str == "real") {
            field = ScalarField::Real;
        } else if (field_str == "complex") {
            field = ScalarField::Complex;
        } else {
            throw ParseError("frame: field must be \"real\" or \"complex\", got \"" +
                             field_str + "\"");
        }
        const int n = j.at("n").get<int>();
        const int m = j.at("m").get<int>();
        if (n < 1 || m < 1) {
            throw ParseError("frame: need positive n and m");
        }
        const Json& rows = j.at("entries");
        if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
            throw ParseError("frame: entries must hold n rows");
        }
        Matrix entries(n, m);
        for (int i = 0; i < n; ++i) {
            const Json& row = rows.at(static_cast<std::size_t>(i));
            if (!row.is_array() || static_cast<int>(row.size()) != m) {
                throw ParseError("frame: row " + std::to_string(i) +
                                 " must hold m entries");
            }
            for (int jcol = 0; jcol < m; ++jcol) {
                const Json& cell = row.at(static_cast<std::size_t>(jcol));
                double re = 0.0;
                double im = 0.0;
                if (cell.is_number()) {
                    re = cell.get<double>();
                } else if (cell.is_array() && cell.size() == 2 &&
                           cell.at(0).is_number() && cell.at(1).is_number()) {
                    re = cell.at(0).get<double>();
                    im = cell.at(1).get<double>();
                } else {
                    throw ParseError("frame: entry (" + std::to_string(i) + "," +
                                     std::to_string(jcol) +
                                     ") must be a number or [re, im]");
                }
                if (!std::isfinite(re) || !std::isfinite(im)) {
                    throw ParseError("frame: non-finite entry (" + std::to_string(i) +
                                     "," + std::to_string(jcol) + ")");
                }
                if (field == ScalarField::Real && im != 0.0) {
                    throw ParseError("frame: real frame with nonzero imaginary part");
                }
                entries(i, jcol) = Complex(re, im);
            }
        }
        return Frame(field, std::move(entries));
    } catch (const Json::exception& e) {
        throw ParseError(std::string("frame: malformed JSON: ") + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path);
    }
    out << text;
}

inline Frame read_frame(const std::string& path) {
    return frame_from_json(read_json_file(path));
}

inline void write_frame(const Frame& frame, const std::string& path) {
    write_text_file(path, frame_to_json(frame).dump(2) + "\n");
}

} // namespace framelab
