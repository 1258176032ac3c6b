#pragma once

// JSON serialization of results.  Rationals are "a/b" strings, never floats.

#include <charsub/aseq.hpp>
#include <charsub/circle.hpp>
#include <charsub/classify.hpp>
#include <charsub/membership.hpp>
#include <charsub/metric.hpp>
#include <charsub/numeric.hpp>

#include <json.hpp>

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace charsub {

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return to_string(r); }
inline Json to_json(const Int& n) { return n.get_str(); }
inline Json to_json(const CirclePoint& x) { return to_string(x.value()); }

inline Json to_json(const Interval& iv) {
    return Json{{"lo", to_json(iv.lo)}, {"hi", to_json(iv.hi)}, {"upper_open", iv.upper_open}};
}

inline Json to_json(const PAdicOrder& o) {
    Json j{{"value", o.render()}, {"exact", o.exact}};
    if (o.exact && !o.infinite) j["stable_from"] = o.stable_from;
    if (!o.exact) j["scanned_up_to"] = o.scanned_up_to;
    return j;
}

inline Json to_json(const Certificate& c) {
    Json j{{"kind", certificate_kind(c)}};
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, RationalDivisibility>) {
                j["denominator"] = to_json(v.denominator);
                if (v.m) j["m"] = *v.m;
                if (v.prime) {
                    j["prime"] = to_json(*v.prime);
                    j["needed"] = v.needed;
                    j["order"] = to_json(v.order);
                }
            } else if constexpr (std::is_same_v<T, BoundedSupportFinite>) {
                j["last_index"] = v.last_index;
            } else if constexpr (std::is_same_v<T, BoundedSupportInfinite>) {
                j["support"] = v.support;
                j["witnesses"] = v.witnesses;
            } else if constexpr (std::is_same_v<T, DivergentSupportLimit>) {
                j["limit"] = to_json(v.limit);
                j["condition2"] = v.condition2;
                j["exceptional"] = v.exceptional;
            } else if constexpr (std::is_same_v<T, DivergentSupportNonNull>) {
                j["limit"] = to_json(v.limit);
                j["limit_norm"] = to_json(v.limit_norm);
            } else if constexpr (std::is_same_v<T, NumericWitness>) {
                j["n"] = v.n;
                j["lower"] = to_json(v.lower);
                j["eps"] = to_json(v.eps);
            } else {
                j["scanned"] = v.scanned;
                j["reason"] = v.reason;
            }
        },
        c);
    return j;
}

inline Json to_json(const Verdict& v) {
    return Json{{"decision", to_string(v.decision)},
                {"certificate", to_json(v.certificate)},
                {"basis", v.basis},
                {"horizon", v.horizon}};
}

inline Json to_json(const TorsionStructure& t) {
    Json entries = Json::array();
    for (auto& e : t.entries) entries.push_back(Json{{"p", to_json(e.p)}, {"n_p", to_json(e.order)}});
    return Json{{"structure", t.render()},
                {"exact", t.exact()},
                {"bound", to_json(t.bound)},
                {"beyond_bound", to_string(t.beyond)},
                {"primes", entries}};
}

inline Json to_json(const RatioSummary& r) {
    Json j{{"bounded", to_string(r.bounded)}, {"divergent", to_string(r.divergent)}};
    j["sup"] = r.sup ? to_json(*r.sup) : Json(nullptr);
    j["limsup"] = r.limsup ? to_json(*r.limsup) : Json(nullptr);
    return j;
}

inline Json to_json(const SubgroupReport& r) {
    Json prov = Json::object();
    for (auto& [k, v] : r.provenance) prov[k] = v;
    return Json{{"sequence", r.sequence},
                {"ratios", to_json(r.ratios)},
                {"ratios_bounded", to_string(r.ratios_bounded)},
                {"countable", to_string(r.countable)},
                {"subset_of_Q_mod_Z", to_string(r.subset_of_q_mod_z)},
                {"f_sigma", to_string(r.f_sigma)},
                {"tau_star_open", to_string(r.tau_star_open)},
                {"tau_open", to_string(r.tau_open)},
                {"cardinality", r.cardinality},
                {"tau_discrete", to_string(r.tau_discrete)},
                {"measure_zero", to_string(r.measure_zero)},
                {"torsion", to_json(r.torsion)},
                {"torsion_dense", to_string(r.torsion_dense)},
                {"provenance", prov}};
}

inline Json to_json(const RhoResult& r) {
    Json j{{"exact", r.exact}};
    if (r.exact) j["value"] = to_json(r.value);
    j["bounds"] = to_json(r.bounds);
    j["horizon"] = r.horizon;
    return j;
}

inline Json to_json(const RhoInterval& r) {
    return Json{{"bounds", to_json(r.bounds)},
                {"width", to_json(r.bounds.width())},
                {"horizon", r.horizon},
                {"guard_index", r.guard},
                {"tail_bound", to_json(r.tail_bound)}};
}

inline Json to_json(const XSNormBounds& b) {
    return Json{{"k", b.k},
                {"n_k", b.n_k},
                {"closed_form", to_json(b.closed_form)},
                {"enclosure", to_json(b.enclosure)},
                {"verified", b.verified}};
}

inline Json to_json(const ApproxResult& a) {
    return Json{{"xprime", to_json(a.xprime)},
                {"n_star", a.n_star},
                {"certificate", to_json(a.certificate)},
                {"independent", to_json(a.independent)},
                {"independent_horizon", a.independent_horizon},
                {"confirmed", a.confirmed}};
}

inline Json to_json(const std::vector<CirclePoint>& pts) {
    Json j = Json::array();
    for (auto& p : pts) j.push_back(to_json(p));
    return j;
}

}  // namespace charsub
