#include "cmbp/io_formats.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "cmbp/errors.hpp"

namespace cmbp {

namespace {

[[noreturn]] void format_error(const std::string& name, int line, const std::string& msg)
{
    fail(ErrorCode::FormatError, name + ":" + std::to_string(line) + ": " + msg);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Splits a line into whitespace-separated tokens.
std::vector<std::string> tokens(const std::string& line)
{
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string t;
    while (ss >> t)
        out.push_back(t);
    return out;
}

double parse_double(const std::string& tok, const std::string& name, int line)
{
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        format_error(name, line, "expected a number, got '" + tok + "'");
    return v;
}

long parse_long(const std::string& tok, const std::string& name, int line)
{
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0')
        format_error(name, line, "expected an integer, got '" + tok + "'");
    return v;
}

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    return out;
}

std::ifstream open_in(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    return in;
}

void check_write(std::ostream& out, const std::string& path)
{
    if (!out)
        fail(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace

void write_grid2(const GridImage& img, const std::string& path)
{
    std::ofstream out = open_out(path);
    out << "GRID2 v1 " << img.nx << ' ' << img.ny << ' ' << fmt(img.origin.x) << ' '
        << fmt(img.origin.y) << ' ' << fmt(img.dx) << ' ' << fmt(img.dy) << '\n';
    for (int iy = 0; iy < img.ny; ++iy) {
        for (int ix = 0; ix < img.nx; ++ix) {
            if (ix)
                out << ' ';
            out << fmt(img.at(ix, iy));
        }
        out << '\n';
    }
    check_write(out, path);
}

GridImage read_grid2(const std::string& path)
{
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        format_error(path, 1, "missing GRID2 header");
    const auto head = tokens(line);
    if (head.size() != 8 || head[0] != "GRID2" || head[1] != "v1")
        format_error(path, 1, "malformed GRID2 header");
    const int nx = static_cast<int>(parse_long(head[2], path, 1));
    const int ny = static_cast<int>(parse_long(head[3], path, 1));
    if (nx < 2 || ny < 2)
        format_error(path, 1, "grid must be at least 2x2");
    GridImage img = GridImage::zeros(nx, ny, {parse_double(head[4], path, 1),
                                              parse_double(head[5], path, 1)},
                                     parse_double(head[6], path, 1),
                                     parse_double(head[7], path, 1));
    for (int iy = 0; iy < ny; ++iy) {
        if (!std::getline(in, line))
            format_error(path, iy + 2, "unexpected end of file");
        const auto vals = tokens(line);
        if (static_cast<int>(vals.size()) != nx)
            format_error(path, iy + 2, "expected " + std::to_string(nx) + " values, got " +
                                           std::to_string(vals.size()));
        for (int ix = 0; ix < nx; ++ix)
            img.at(ix, iy) = parse_double(vals[static_cast<std::size_t>(ix)], path, iy + 2);
    }
    return img;
}

void write_bser(const BoundarySeries& s, const std::string& path)
{
    std::ofstream out = open_out(path);
    out << "BSER v1 " << (s.kind == SeriesKind::Means ? "means" : "wave") << ' '
        << s.n_centers() << ' ' << s.n_samples << ' ' << fmt(s.step) << ' ' << fmt(s.limit)
        << '\n';
    for (const auto& c : s.centers)
        out << fmt(c.x) << ' ' << fmt(c.y) << '\n';
    for (int i = 0; i < s.n_centers(); ++i) {
        for (int j = 0; j < s.n_samples; ++j) {
            if (j)
                out << ' ';
            out << fmt(s.at(i, j));
        }
        out << '\n';
    }
    check_write(out, path);
}

BoundarySeries read_bser(const std::string& path)
{
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line))
        format_error(path, 1, "missing BSER header");
    const auto head = tokens(line);
    if (head.size() != 7 || head[0] != "BSER" || head[1] != "v1")
        format_error(path, 1, "malformed BSER header");
    BoundarySeries s;
    if (head[2] == "means")
        s.kind = SeriesKind::Means;
    else if (head[2] == "wave")
        s.kind = SeriesKind::Wave;
    else
        format_error(path, 1, "unknown series kind '" + head[2] + "'");
    const int nc = static_cast<int>(parse_long(head[3], path, 1));
    s.n_samples = static_cast<int>(parse_long(head[4], path, 1));
    s.step = parse_double(head[5], path, 1);
    s.limit = parse_double(head[6], path, 1);
    if (nc < 1 || s.n_samples < 1 || !(s.step > 0.0))
        format_error(path, 1, "invalid BSER dimensions");

    s.centers.resize(static_cast<std::size_t>(nc));
    int lineno = 1;
    for (int i = 0; i < nc; ++i) {
        if (!std::getline(in, line))
            format_error(path, lineno + 1, "unexpected end of file in centers");
        ++lineno;
        const auto vals = tokens(line);
        if (vals.size() != 2)
            format_error(path, lineno, "expected 'cx cy'");
        s.centers[static_cast<std::size_t>(i)] = {parse_double(vals[0], path, lineno),
                                                  parse_double(vals[1], path, lineno)};
    }
    s.values.assign(static_cast<std::size_t>(nc) * s.n_samples, 0.0);
    for (int i = 0; i < nc; ++i) {
        if (!std::getline(in, line))
            format_error(path, lineno + 1, "unexpected end of file in values");
        ++lineno;
        const auto vals = tokens(line);
        if (static_cast<int>(vals.size()) != s.n_samples)
            format_error(path, lineno, "expected " + std::to_string(s.n_samples) +
                                           " values, got " + std::to_string(vals.size()));
        for (int j = 0; j < s.n_samples; ++j)
            s.at(i, j) = parse_double(vals[static_cast<std::size_t>(j)], path, lineno);
    }
    return s;
}

ConvexDomain parse_domain_spec(std::istream& in, const std::string& name, int boundary_nodes)
{
    std::string line;
    int lineno = 0;
    bool have = false;
    ConvexDomain dom = ConvexDomain::disc({0, 0}, 1.0, 8);  // placeholder
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = tokens(line);
        if (t.empty() || t[0][0] == '#')
            continue;
        if (have)
            format_error(name, lineno, "more than one domain definition");
        if (t[0] == "disc") {
            if (t.size() != 4)
                format_error(name, lineno, "disc needs 'disc cx cy r'");
            dom = ConvexDomain::disc({parse_double(t[1], name, lineno),
                                      parse_double(t[2], name, lineno)},
                                     parse_double(t[3], name, lineno), boundary_nodes);
        } else if (t[0] == "ellipse") {
            if (t.size() != 5)
                format_error(name, lineno, "ellipse needs 'ellipse cx cy a b'");
            dom = ConvexDomain::ellipse({parse_double(t[1], name, lineno),
                                         parse_double(t[2], name, lineno)},
                                        parse_double(t[3], name, lineno),
                                        parse_double(t[4], name, lineno), boundary_nodes);
        } else if (t[0] == "superellipse") {
            if (t.size() != 6)
                format_error(name, lineno, "superellipse needs 'superellipse cx cy a b p'");
            dom = ConvexDomain::superellipse({parse_double(t[1], name, lineno),
                                              parse_double(t[2], name, lineno)},
                                             parse_double(t[3], name, lineno),
                                             parse_double(t[4], name, lineno),
                                             parse_double(t[5], name, lineno), boundary_nodes);
        } else {
            format_error(name, lineno, "unknown domain kind '" + t[0] + "'");
        }
        have = true;
    }
    if (!have)
        format_error(name, lineno ? lineno : 1, "no domain definition found");
    return dom;
}

ConvexDomain load_domain_spec(const std::string& path, int boundary_nodes)
{
    std::ifstream in = open_in(path);
    return parse_domain_spec(in, path, boundary_nodes);
}

Phantom parse_phantom_spec(std::istream& in, const std::string& name)
{
    std::string line;
    int lineno = 0;
    std::vector<Bump> bumps;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = tokens(line);
        if (t.empty() || t[0][0] == '#')
            continue;
        if (t[0] != "bump" || t.size() != 5)
            format_error(name, lineno, "expected 'bump cx cy rho amp'");
        bumps.push_back(Bump{{parse_double(t[1], name, lineno), parse_double(t[2], name, lineno)},
                             parse_double(t[3], name, lineno),
                             parse_double(t[4], name, lineno)});
    }
    return Phantom(std::move(bumps));
}

Phantom load_phantom_spec(const std::string& path)
{
    std::ifstream in = open_in(path);
    return parse_phantom_spec(in, path);
}

void save_phantom_spec(const Phantom& ph, const std::string& path)
{
    std::ofstream out = open_out(path);
    for (const auto& b : ph.bumps())
        out << "bump " << fmt(b.center.x) << ' ' << fmt(b.center.y) << ' ' << fmt(b.rho) << ' '
            << fmt(b.amp) << '\n';
    check_write(out, path);
}

}  // namespace cmbp
