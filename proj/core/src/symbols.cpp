#include "dcsrepair/symbols.hpp"

#include <functional>

namespace dcsrepair {

namespace {

// Shared walk over every identifier reference in the AST. collect_symbols and
// find_unresolved_references are the two consumers; keeping one traversal
// stops them drifting apart.
struct RefVisitor {
  // category tags for resolution
  enum class Cat { ProcessRef, SetRef, RangeOrSetRef, ConstRef, GoalRef, RequirementRef };

  std::function<void(const NameRef&, Cat, const std::string& scope)> on_upper;
  std::function<void(const std::string&, const Span&)> on_action;

  void walk_expr(const Expr& e, const std::string& scope) {
    if (e.kind == Expr::Kind::ConstRef) on_upper(NameRef{e.name, e.span}, Cat::ConstRef, scope);
    for (const Expr& k : e.kids) walk_expr(k, scope);
  }

  void walk_range_ref(const RangeRef& r, const std::string& scope) {
    if (r.named) on_upper(*r.named, Cat::RangeOrSetRef, scope);
    if (r.lo) walk_expr(*r.lo, scope);
    if (r.hi) walk_expr(*r.hi, scope);
  }

  void walk_label(const ActionLabel& label, const std::string& scope) {
    on_action(label.head.name, label.head.span);
    for (const LabelPart& p : label.parts) {
      switch (p.kind) {
        case LabelPart::Kind::DottedName:
          on_action(p.name, p.span);
          break;
        case LabelPart::Kind::DottedInt:
          break;
        case LabelPart::Kind::Index:
          if (p.index) walk_expr(*p.index, scope);
          break;
        case LabelPart::Kind::Binder:
          if (p.range) walk_range_ref(*p.range, scope);
          break;
      }
    }
  }

  void walk_set_elem(const SetElem& e, const std::string& scope) {
    if (e.action) walk_label(*e.action, scope);
    if (e.set_ref) on_upper(*e.set_ref, Cat::SetRef, scope);
  }

  void walk_target(const Target& t, const std::string& scope) {
    if (t.kind == Target::Kind::Ref) {
      on_upper(t.ref, Cat::ProcessRef, scope);
      for (const Expr& e : t.indices) walk_expr(e, scope);
    }
    if (t.kind == Target::Kind::Group && t.group) walk_choice(*t.group, scope);
  }

  void walk_choice(const Choice& c, const std::string& scope) {
    for (const Alternative& alt : c.alternatives) {
      if (alt.guard) walk_expr(*alt.guard, scope);
      for (const ActionLabel& a : alt.actions) walk_label(a, scope);
      walk_target(alt.target, scope);
    }
  }

  void walk_post_ops(const PostOps& ops, const std::string& scope) {
    for (const RelabelPair& p : ops.relabels) {
      walk_label(p.fresh, scope);
      walk_label(p.old, scope);
    }
    for (const ActionLabel& l : ops.hidden) {
      if (!l.head.name.empty() && std::isupper(static_cast<unsigned char>(l.head.name[0]))) {
        on_upper(l.head, Cat::SetRef, scope);
      } else {
        walk_label(l, scope);
      }
    }
  }

  void walk_composite_expr(const CompositeExpr& body, const std::string& scope) {
    for (const CompositeElem& elem : body.elements) {
      if (elem.label) walk_label(*elem.label, scope);
      if (elem.ref) on_upper(*elem.ref, Cat::ProcessRef, scope);
      for (const Expr& e : elem.args) walk_expr(e, scope);
      if (elem.nested) walk_composite_expr(*elem.nested, scope);
      if (elem.ops) walk_post_ops(*elem.ops, scope);
    }
  }

  void walk_formula(const Formula& f, const std::string& scope) {
    if (f.kind == Formula::Kind::FluentRef && !f.ref.name.empty())
      on_upper(f.ref, Cat::RequirementRef, scope);
    for (const Formula& k : f.kids) walk_formula(k, scope);
  }

  void walk(const Ast& ast) {
    for (const Definition& def : ast.definitions) {
      std::visit(
          [&](const auto& body) {
            using T = std::decay_t<decltype(body)>;
            const std::string scope = body.name.name;
            if constexpr (std::is_same_v<T, ConstDef>) {
              (void)body;
            } else if constexpr (std::is_same_v<T, RangeDef>) {
              walk_expr(body.lo, scope);
              walk_expr(body.hi, scope);
            } else if constexpr (std::is_same_v<T, SetDef>) {
              for (const SetElem& e : body.elements) walk_set_elem(e, scope);
            } else if constexpr (std::is_same_v<T, ProcessDef>) {
              for (const IndexDecl& d : body.indices) {
                if (d.range) walk_range_ref(*d.range, scope);
                if (d.expr) walk_expr(*d.expr, scope);
              }
              walk_choice(body.body, scope);
              for (const LocalDef& local : body.locals) {
                for (const IndexDecl& d : local.indices) {
                  if (d.range) walk_range_ref(*d.range, scope);
                  if (d.expr) walk_expr(*d.expr, scope);
                }
                walk_choice(local.body, scope);
              }
              walk_post_ops(body.ops, scope);
            } else if constexpr (std::is_same_v<T, CompositeDef>) {
              walk_composite_expr(body.body, scope);
              walk_post_ops(body.ops, scope);
            } else if constexpr (std::is_same_v<T, FluentDef>) {
              for (const SetElem& e : body.initiating) walk_set_elem(e, scope);
              for (const SetElem& e : body.terminating) walk_set_elem(e, scope);
            } else if constexpr (std::is_same_v<T, FltlDef>) {
              walk_formula(body.formula, scope);
            } else if constexpr (std::is_same_v<T, ControllerSpecDef>) {
              for (const NameRef& n : body.safety) on_upper(n, Cat::RequirementRef, scope);
              for (const NameRef& n : body.liveness) on_upper(n, Cat::RequirementRef, scope);
              for (const NameRef& n : body.assumption) on_upper(n, Cat::RequirementRef, scope);
              for (const NameRef& n : body.controllable) on_upper(n, Cat::SetRef, scope);
            } else if constexpr (std::is_same_v<T, ControllerDef>) {
              if (!body.environment.name.empty())
                on_upper(body.environment, Cat::ProcessRef, scope);
              if (!body.goal.name.empty()) on_upper(body.goal, Cat::GoalRef, scope);
            }
          },
          def.body);
    }
  }
};

}  // namespace

SymbolTable collect_symbols(const Ast& ast) {
  SymbolTable table;

  for (const Definition& def : ast.definitions) {
    std::visit(
        [&](const auto& body) {
          using T = std::decay_t<decltype(body)>;
          const std::string& name = body.name.name;
          if (name.empty()) return;
          if constexpr (std::is_same_v<T, ConstDef>) table.consts.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, RangeDef>) table.ranges.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, SetDef>) table.sets.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, FluentDef>) table.fluents.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, FltlDef>) table.properties.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, ControllerSpecDef>) table.specs.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, ControllerDef>) table.composites.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, CompositeDef>) table.composites.emplace(name, body.name.span);
          else if constexpr (std::is_same_v<T, ProcessDef>) {
            table.processes.emplace(name, body.name.span);
            for (const LocalDef& local : body.locals)
              if (!local.name.name.empty())
                table.locals_by_process[name].insert(local.name.name);
            for (const Param& p : body.params)
              table.params_by_def[name].insert(p.name.name);
          }
          if constexpr (std::is_same_v<T, CompositeDef>) {
            for (const Param& p : body.params) table.params_by_def[name].insert(p.name.name);
          }
          table.upper_uses[name].push_back(body.name.span);
          if constexpr (std::is_same_v<T, ProcessDef>) {
            for (const LocalDef& local : body.locals)
              if (!local.name.name.empty())
                table.upper_uses[local.name.name].push_back(local.name.span);
            for (const Param& p : body.params)
              table.upper_uses[p.name.name].push_back(p.name.span);
          }
        },
        def.body);
  }

  RefVisitor visitor;
  visitor.on_upper = [&](const NameRef& ref, RefVisitor::Cat, const std::string&) {
    if (!ref.name.empty()) table.upper_uses[ref.name].push_back(ref.span);
  };
  visitor.on_action = [&](const std::string& name, const Span& span) {
    if (!name.empty()) table.actions[name].push_back(span);
  };
  visitor.walk(ast);
  return table;
}

std::vector<Diagnostic> find_unresolved_references(const Ast& ast, const SymbolTable& table) {
  std::vector<Diagnostic> diags;

  auto resolves_process = [&](const std::string& name, const std::string& scope) {
    if (table.processes.count(name) || table.composites.count(name)) return true;
    auto it = table.locals_by_process.find(scope);
    return it != table.locals_by_process.end() && it->second.count(name) > 0;
  };
  auto resolves_const = [&](const std::string& name, const std::string& scope) {
    if (table.consts.count(name) || table.ranges.count(name)) return true;
    auto it = table.params_by_def.find(scope);
    return it != table.params_by_def.end() && it->second.count(name) > 0;
  };

  RefVisitor visitor;
  visitor.on_action = [](const std::string&, const Span&) {};
  visitor.on_upper = [&](const NameRef& ref, RefVisitor::Cat cat, const std::string& scope) {
    if (ref.name.empty()) return;
    bool ok = true;
    const char* what = "name";
    switch (cat) {
      case RefVisitor::Cat::ProcessRef:
        ok = resolves_process(ref.name, scope);
        what = "process";
        break;
      case RefVisitor::Cat::SetRef:
        ok = table.sets.count(ref.name) > 0;
        what = "set";
        break;
      case RefVisitor::Cat::RangeOrSetRef:
        ok = table.ranges.count(ref.name) || table.sets.count(ref.name);
        what = "range";
        break;
      case RefVisitor::Cat::ConstRef:
        ok = resolves_const(ref.name, scope);
        what = "constant";
        break;
      case RefVisitor::Cat::GoalRef:
        ok = table.specs.count(ref.name) > 0;
        what = "controller goal";
        break;
      case RefVisitor::Cat::RequirementRef:
        ok = table.fluents.count(ref.name) || table.properties.count(ref.name) ||
             table.sets.count(ref.name);
        what = "fluent or property";
        break;
    }
    if (!ok) {
      diags.push_back(Diagnostic{DiagnosticCode::UnresolvedReference, Severity::Error, ref.span,
                                 "reference to undefined " + std::string(what) + " '" +
                                     ref.name + "'"});
    }
  };
  visitor.walk(ast);
  sort_by_position(diags);
  return diags;
}

}  // namespace dcsrepair
