#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dcsrepair/ast.hpp"
#include "dcsrepair/diagnostic.hpp"

namespace dcsrepair {

// Identifier universe of a model: definitions by category plus every
// occurrence of upper- and lower-class identifiers. Names are case-sensitive.
struct SymbolTable {
  std::map<std::string, Span> processes;
  std::map<std::string, Span> composites;
  std::map<std::string, Span> sets;
  std::map<std::string, Span> ranges;
  std::map<std::string, Span> consts;
  std::map<std::string, Span> fluents;
  std::map<std::string, Span> specs;       // controllerSpec definitions
  std::map<std::string, Span> properties;  // assert / ltl_property definitions

  // Action vocabulary: every lower-identifier occurrence that denotes an
  // action label (or label part). Index variables are not actions and are
  // excluded.
  std::map<std::string, std::vector<Span>> actions;
  // Every upper-identifier occurrence: definitions and references alike.
  std::map<std::string, std::vector<Span>> upper_uses;

  std::map<std::string, std::set<std::string>> locals_by_process;
  std::map<std::string, std::set<std::string>> params_by_def;

  bool defined_upper(const std::string& name) const {
    return processes.count(name) || composites.count(name) || sets.count(name) ||
           ranges.count(name) || consts.count(name) || fluents.count(name) ||
           specs.count(name) || properties.count(name);
  }
};

SymbolTable collect_symbols(const Ast& ast);

// One UnresolvedReference error per reference to an undefined
// process/set/range/fluent/spec name, resolved against the category the
// reference position calls for.
std::vector<Diagnostic> find_unresolved_references(const Ast& ast, const SymbolTable& table);

}  // namespace dcsrepair
