/* Workspace documents: JSON descriptors for groups, representations, curves,
 * geometries, SNC configurations, heart objects and morphisms, with symbolic
 * cross-references by identifier, plus the command drivers behind the CLI.
 * Matrices travel as row-major arrays of exact integer strings. */
#pragma once

#include "artinperv/heart.hpp"
#include "artinperv/snc.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace artinperv {

/* malformed documents, bad shapes, dangling references, unreadable files:
 * surfaced as CLI exit code 2.  Domain violations stay artinperv::error
 * (exit code 1). */
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Declaration {
    std::string section; /* "groups", "reps", ... */
    std::string id;
    std::string where;   /* positional diagnostic prefix, e.g. "file.json: objects[2] 'm'" */
};

struct Workspace {
    std::map<std::string, std::shared_ptr<const FiniteGroup>> groups;
    std::map<std::string, BaseField> base_fields;
    std::map<std::string, std::shared_ptr<const CurveData>> curves;
    std::map<std::string, GeomDatum> geometries;
    std::map<std::string, SNCData> sncs;
    std::map<std::string, ArtinRep> reps;
    std::map<std::string, NObject> objects;
    std::map<std::string, NMorphism> morphisms;

    std::vector<Declaration> declarations;  /* in load order */
    nlohmann::json canonical;               /* accumulated definitions by section */

    /* lookups; throw parse_error("unknown <kind> '<id>'") on dangling ids */
    std::shared_ptr<const FiniteGroup> group(const std::string& id) const;
    const BaseField& base_field(const std::string& id) const;
    std::shared_ptr<const CurveData> curve(const std::string& id) const;
    const GeomDatum& geometry(const std::string& id) const;
    const SNCData& snc(const std::string& id) const;
    const ArtinRep& rep(const std::string& id) const;
    const NObject& object(const std::string& id) const;
    const NMorphism& morphism(const std::string& id) const;
};

/* parse one document; `where` prefixes diagnostics (usually the file path).
 * Sections load in dependency order: groups, base_fields, curves,
 * geometries, sncs, reps, objects, morphisms. */
void load_document(Workspace& ws, const std::string& where, const nlohmann::json& doc);
void load_document_text(Workspace& ws, const std::string& where, const std::string& text);
void load_file(Workspace& ws, const std::string& path);

/* canonical re-serialization of everything loaded (re-parse equal) */
std::string serialize_workspace(const Workspace& ws);

/* ------------------------------ commands -------------------------------- */

struct CliReport {
    nlohmann::json doc;  /* machine-readable result document */
    std::string pretty;  /* plain-text table */
    bool ok = true;      /* false = domain violations found (exit code 1) */
};

CliReport run_validate(const Workspace& ws);
CliReport run_omega0(const Workspace& ws, const std::string& geometry_id,
                     const Coefficients& r, std::optional<int> twist);
CliReport run_snc(const Workspace& ws, const std::string& snc_id, const Coefficients& r,
                  std::optional<long> shriek_r);
CliReport run_cone(const Workspace& ws, const std::string& geometry_id, unsigned long ell,
                   long embedding_degree, const Coefficients& r);

struct HeartOptions {
    int shift = 0;          /* truncate: look at object[shift] */
    unsigned long ell = 0;  /* realize: the prime */
};
/* subcommand ∈ {kernel, cokernel, image, iext, truncate, simple, series,
 * realize}; kernel/cokernel/image take a morphism id, the rest an object id */
CliReport run_heart(const Workspace& ws, const std::string& subcommand, const std::string& id,
                    const HeartOptions& opt);

/* ARTINPERV_SEED environment variable, for reproducing randomized suites */
unsigned long long env_seed(unsigned long long fallback);

} // namespace artinperv
