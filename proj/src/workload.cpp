#include "dyncover/workload.hpp"

#include <charconv>
#include <istream>
#include <sstream>

namespace dyncover {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

const char* kind_token(Kind k) {
    switch (k) {
        case Kind::Interval1D: return "interval";
        case Kind::Quadrant2D: return "quadrant";
        case Kind::UnitSquare2D: return "unitsquare";
    }
    return "?";
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

double parse_num(const std::string& s, int line) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::ParseError, "bad number '" + s + "' at line " + std::to_string(line), line);
    return v;
}

Instance parse_header(const std::string& line) {
    auto fail = [&](const std::string& why) -> Error { return Error(ErrorCode::ParseError, "header: " + why, 1); };
    auto toks = split_ws(line);
    if (toks.size() < 4 || toks[0] != "#dyncover" || toks[1] != "v1") throw fail("expected '#dyncover v1'");
    Instance inst;
    size_t i = 2;
    bool haveKind = false, haveWeighted = false, haveRange = false;
    while (i < toks.size()) {
        const std::string& t = toks[i];
        if (t.rfind("kind=", 0) == 0) {
            std::string k = t.substr(5);
            if (k == "interval") inst.kind = Kind::Interval1D;
            else if (k == "quadrant") inst.kind = Kind::Quadrant2D;
            else if (k == "unitsquare") inst.kind = Kind::UnitSquare2D;
            else throw fail("unknown kind " + k);
            haveKind = true;
            i++;
        } else if (t.rfind("weighted=", 0) == 0) {
            std::string w = t.substr(9);
            if (w != "0" && w != "1") throw fail("weighted must be 0 or 1");
            inst.weighted = w == "1";
            haveWeighted = true;
            i++;
        } else if (t.rfind("range=", 0) == 0) {
            if (!haveKind) throw fail("range before kind");
            size_t need = inst.kind == Kind::Interval1D ? 2 : 4;
            std::vector<double> v;
            v.push_back(parse_num(t.substr(6), 1));
            for (size_t j = 1; j < need; j++) {
                if (i + j >= toks.size()) throw fail("short range");
                v.push_back(parse_num(toks[i + j], 1));
            }
            if (need == 2) inst.pointRange = {v[0], v[1], 0, 0};
            else inst.pointRange = {v[0], v[1], v[2], v[3]};
            if (inst.pointRange.x0 > inst.pointRange.x1 || inst.pointRange.y0 > inst.pointRange.y1)
                throw fail("empty range");
            haveRange = true;
            i += need;
        } else {
            throw fail("unknown field " + t);
        }
    }
    if (!haveKind || !haveWeighted || !haveRange) throw fail("missing field");
    return inst;
}

}  // namespace

Workload parse_workload(std::istream& in) {
    Workload wl;
    std::string line;
    int lineNo = 0;
    bool header = false;
    while (std::getline(in, line)) {
        lineNo++;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!header) {
            wl.initial = parse_header(line);
            header = true;
            continue;
        }
        auto toks = split_ws(line);
        if (toks.empty()) continue;
        auto fail = [&](const std::string& why) {
            return Error(ErrorCode::ParseError, why + " at line " + std::to_string(lineNo), lineNo);
        };
        const Instance& inst = wl.initial;
        UpdateOp op;
        const std::string& tag = toks[0];
        if (tag == "Q") {
            if (toks.size() != 1) throw fail("Q takes no arguments");
            op.action = Action::Snapshot;
        } else if (tag == "+P" || tag == "-P") {
            size_t need = inst.kind == Kind::Interval1D ? 2 : 3;
            if (toks.size() != need) throw fail("wrong point arity");
            op.action = tag == "+P" ? Action::InsertPoint : Action::DeletePoint;
            op.point.x = parse_num(toks[1], lineNo);
            if (need == 3) op.point.y = parse_num(toks[2], lineNo);
        } else if (tag == "+R" || tag == "-R") {
            op.action = tag == "+R" ? Action::InsertRange : Action::DeleteRange;
            size_t params = inst.kind == Kind::Interval1D ? 2 : inst.kind == Kind::Quadrant2D ? 3 : 2;
            size_t n = toks.size() - 1;
            if (n != params && n != params + 1) throw fail("wrong range arity");
            if (inst.weighted && n != params + 1) throw fail("weighted range needs a weight");
            double w = n == params + 1 ? parse_num(toks.back(), lineNo) : 1.0;
            if (!inst.weighted && w != 1) throw fail("unweighted range with weight != 1");
            if (inst.kind == Kind::Interval1D) {
                op.range = Interval{parse_num(toks[1], lineNo), parse_num(toks[2], lineNo), w};
            } else if (inst.kind == Kind::Quadrant2D) {
                Dir d;
                if (!parse_dir(toks[1], d)) throw fail("bad quadrant direction");
                op.range = Quadrant{d, parse_num(toks[2], lineNo), parse_num(toks[3], lineNo), w};
            } else {
                op.range = UnitSquare{parse_num(toks[1], lineNo), parse_num(toks[2], lineNo), w};
            }
        } else {
            throw fail("unknown op '" + tag + "'");
        }
        op.opIndex = wl.ops.size();
        wl.ops.push_back(op);
    }
    if (!header) throw Error(ErrorCode::ParseError, "missing header", 1);
    return wl;
}

Workload parse_workload_text(const std::string& text) {
    std::istringstream ss(text);
    return parse_workload(ss);
}

namespace {

void write_range(std::ostream& out, const Range& r, bool weighted) {
    if (auto* i = std::get_if<Interval>(&r)) out << format_double(i->a) << ' ' << format_double(i->b);
    else if (auto* q = std::get_if<Quadrant>(&r))
        out << dir_name(q->dir) << ' ' << format_double(q->vx) << ' ' << format_double(q->vy);
    else {
        auto& s = std::get<UnitSquare>(r);
        out << format_double(s.cx) << ' ' << format_double(s.cy);
    }
    if (weighted) out << ' ' << format_double(weight_of(r));
}

void write_op(std::ostream& out, const Instance& inst, const UpdateOp& op) {
    out << action_tag(op.action);
    switch (op.action) {
        case Action::InsertPoint:
        case Action::DeletePoint:
            out << ' ' << format_double(op.point.x);
            if (inst.kind != Kind::Interval1D) out << ' ' << format_double(op.point.y);
            break;
        case Action::InsertRange:
        case Action::DeleteRange:
            out << ' ';
            write_range(out, op.range, inst.weighted);
            break;
        case Action::Snapshot: break;
    }
    out << '\n';
}

}  // namespace

std::string serialize_workload(const Instance& inst, const std::vector<UpdateOp>& ops) {
    std::ostringstream out;
    const Rect& pr = inst.pointRange;
    out << "#dyncover v1 kind=" << kind_token(inst.kind) << " weighted=" << (inst.weighted ? 1 : 0) << " range=";
    if (inst.kind == Kind::Interval1D) out << format_double(pr.x0) << ' ' << format_double(pr.x1);
    else
        out << format_double(pr.x0) << ' ' << format_double(pr.x1) << ' ' << format_double(pr.y0) << ' '
            << format_double(pr.y1);
    out << '\n';
    // Existing contents are emitted as inserts so that replay reproduces the instance.
    for (auto& [p, c] : inst.points)
        for (int64_t i = 0; i < c; i++) write_op(out, inst, UpdateOp::insert_point(p));
    for (auto& [r, c] : inst.ranges)
        for (int64_t i = 0; i < c; i++) write_op(out, inst, UpdateOp::insert_range(r));
    for (auto& op : ops) write_op(out, inst, op);
    return out.str();
}

}  // namespace dyncover
