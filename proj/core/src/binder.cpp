#include <map>
#include <string>
#include <vector>

#include "ubf/ast.hpp"

namespace ubf {

namespace {

class Binder {
 public:
  explicit Binder(Ast& ast) : ast_(ast) {}

  void run() {
    ast_.scopes.clear();
    ast_.scopes.push_back(Scope{-1, 0, kNoNode});  // global scope 0
    env_.emplace_back();                           // global symbols
    for (NodeId id : ast_.toplevel) {
      Node& n = ast_.at(id);
      if (n.kind == NodeKind::VarDecl) {
        declare(id, 0);
        if (n.kids[0] != kNoNode) bind_init(n.kids[0], n.type);
      } else if (n.kind == NodeKind::Function) {
        declare_function(id);
      }
    }
    for (NodeId id : ast_.toplevel) {
      if (ast_.at(id).kind == NodeKind::Function) bind_function(id);
    }
  }

 private:
  Ast& ast_;
  std::vector<std::map<std::string, NodeId>> env_;
  std::vector<int> scope_stack_{0};
  NodeId current_fn_ = kNoNode;

  int push_scope(NodeId owner) {
    int parent = scope_stack_.back();
    ast_.scopes.push_back(
        Scope{parent, ast_.scopes[static_cast<size_t>(parent)].depth + 1, owner});
    int id = static_cast<int>(ast_.scopes.size() - 1);
    scope_stack_.push_back(id);
    env_.emplace_back();
    return id;
  }
  void pop_scope() {
    scope_stack_.pop_back();
    env_.pop_back();
  }

  [[noreturn]] void fail(NodeId at, const std::string& msg) {
    throw ParseError(ast_.at(at).loc, msg);
  }

  void declare(NodeId decl, int scope) {
    Node& n = ast_.at(decl);
    if (env_.back().count(n.text))
      fail(decl, "redeclaration of '" + n.text + "'");
    env_.back()[n.text] = decl;
    n.scope = scope;
    if (scope == 0) n.storage = Storage::Global;
  }

  void declare_function(NodeId fn) {
    Node& n = ast_.at(fn);
    auto it = env_.front().find(n.text);
    if (it != env_.front().end()) {
      // allow a prototype followed by the definition
      Node& prev = ast_.at(it->second);
      bool prev_proto = prev.kind == NodeKind::Function && prev.kids[0] == kNoNode;
      bool this_def = n.kids[0] != kNoNode;
      if (!(prev_proto && this_def))
        fail(fn, "redeclaration of '" + n.text + "'");
    }
    env_.front()[n.text] = fn;
    n.scope = 0;
  }

  NodeId lookup(NodeId use, const std::string& name) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      auto hit = it->find(name);
      if (hit != it->end()) return hit->second;
    }
    fail(use, "use of undeclared identifier '" + name + "'");
  }

  void bind_function(NodeId fn) {
    Node& n = ast_.at(fn);
    if (n.kids[0] == kNoNode) return;  // prototype
    current_fn_ = fn;
    int scope = push_scope(fn);
    for (size_t i = 1; i < n.kids.size(); ++i) {
      declare(n.kids[i], scope);
      ast_.at(n.kids[i]).storage = Storage::Param;
    }
    bind_stmt(ast_.at(fn).kids[0]);
    pop_scope();
    current_fn_ = kNoNode;
  }

  void bind_stmt(NodeId id) {
    Node& n = ast_.at(id);
    switch (n.kind) {
      case NodeKind::Block: {
        int scope = push_scope(id);
        n.scope = scope;
        for (NodeId k : ast_.at(id).kids) bind_stmt(k);
        pop_scope();
        break;
      }
      case NodeKind::DeclStmt:
        for (NodeId d : n.kids) {
          Node& v = ast_.at(d);
          declare(d, scope_stack_.back());
          v.storage = v.storage == Storage::Param ? Storage::Param : Storage::Local;
          if (v.kids[0] != kNoNode) bind_init(v.kids[0], v.type);
        }
        break;
      case NodeKind::ExprStmt:
        bind_expr(n.kids[0]);
        break;
      case NodeKind::If: {
        bind_expr(n.kids[0]);
        require_scalar(n.kids[0], "if condition");
        bind_stmt(n.kids[1]);
        if (n.kids[2] != kNoNode) bind_stmt(n.kids[2]);
        break;
      }
      case NodeKind::While: {
        bind_expr(n.kids[0]);
        require_scalar(n.kids[0], "while condition");
        bind_stmt(n.kids[1]);
        break;
      }
      case NodeKind::For: {
        int scope = push_scope(id);
        n.scope = scope;
        if (n.kids[0] != kNoNode) bind_stmt(n.kids[0]);
        if (n.kids[1] != kNoNode) {
          bind_expr(n.kids[1]);
          require_scalar(n.kids[1], "for condition");
        }
        if (n.kids[2] != kNoNode) bind_expr(n.kids[2]);
        bind_stmt(n.kids[3]);
        pop_scope();
        break;
      }
      case NodeKind::Return:
        if (n.kids[0] != kNoNode) bind_expr(n.kids[0]);
        break;
      case NodeKind::Break:
      case NodeKind::Continue:
      case NodeKind::Empty:
        break;
      default:
        fail(id, "unexpected node in statement position");
    }
  }

  void bind_init(NodeId init, TypeId declared) {
    Node& n = ast_.at(init);
    if (n.kind == NodeKind::InitList) {
      const Type& t = ast_.type(declared);
      if (t.kind == TypeKind::Array) {
        if (static_cast<int64_t>(n.kids.size()) > t.count)
          fail(init, "too many array initializers");
        for (NodeId k : n.kids) bind_init(k, t.elem);
      } else if (t.kind == TypeKind::Struct) {
        const StructDef& s = ast_.structs[static_cast<size_t>(t.struct_id)];
        if (n.kids.size() > s.fields.size())
          fail(init, "too many struct initializers");
        for (size_t i = 0; i < n.kids.size(); ++i)
          bind_init(n.kids[i], s.fields[i].type);
      } else {
        fail(init, "initializer list for scalar");
      }
      n.type = declared;
      return;
    }
    bind_expr(init);
    check_assignable(declared, init);
  }

  void require_scalar(NodeId e, const std::string& what) {
    TypeId t = ast_.at(e).type;
    if (!is_int(ast_, t) && !is_pointer_like(ast_, t))
      fail(e, what + " must be scalar");
  }

  bool is_null_constant(NodeId e) const {
    const Node& n = ast_.at(e);
    return n.kind == NodeKind::IntLit && n.ival == 0;
  }

  void check_assignable(TypeId dst, NodeId src) {
    TypeId st = ast_.at(src).type;
    const Type& d = ast_.type(dst);
    if (d.kind == TypeKind::Int) {
      if (!is_int(ast_, st)) fail(src, "integer value required");
      return;
    }
    if (d.kind == TypeKind::Ptr) {
      if (is_null_constant(src)) return;
      if (is_pointer_like(ast_, st)) return;  // pointer conversions are loose
      fail(src, "pointer value required");
    }
    if (d.kind == TypeKind::Struct) {
      const Type& s = ast_.type(st);
      if (s.kind != TypeKind::Struct || s.struct_id != d.struct_id)
        fail(src, "incompatible struct assignment");
      return;
    }
    if (d.kind == TypeKind::Array) fail(src, "cannot assign to array");
  }

  bool is_lvalue(NodeId e) const {
    const Node& n = ast_.at(e);
    switch (n.kind) {
      case NodeKind::Ident:
        return n.decl != kNoNode && ast_.at(n.decl).kind == NodeKind::VarDecl;
      case NodeKind::Index:
      case NodeKind::Member:
        return true;
      case NodeKind::Unary:
        return n.op == Op::Deref;
      default:
        return false;
    }
  }

  TypeId decay(TypeId t) {
    const Type& ty = ast_.type(t);
    if (ty.kind == TypeKind::Array) return ast_.ptr_to(ty.elem);
    return t;
  }

  void bind_expr(NodeId id) {
    Node& n = ast_.at(id);
    switch (n.kind) {
      case NodeKind::IntLit:
      case NodeKind::CharLit:
        return;  // typed at parse
      case NodeKind::StrLit:
        n.type = ast_.ptr_to(ast_.int_type(8, true));
        return;
      case NodeKind::Ident: {
        NodeId d = lookup(id, n.text);
        Node& self = ast_.at(id);
        if (ast_.at(d).kind == NodeKind::Function)
          fail(id, "function name used as value");
        self.decl = d;
        self.type = ast_.at(d).type;
        return;
      }
      case NodeKind::Unary:
        bind_unary(id);
        return;
      case NodeKind::Binary:
        bind_binary(id);
        return;
      case NodeKind::Assign:
        bind_assign(id);
        return;
      case NodeKind::IncDec: {
        bind_expr(n.kids[0]);
        Node& self = ast_.at(id);
        if (!is_lvalue(self.kids[0]))
          fail(id, "operand of ++/-- must be an lvalue");
        TypeId t = ast_.at(self.kids[0]).type;
        if (!is_int(ast_, t) && ast_.type(t).kind != TypeKind::Ptr)
          fail(id, "operand of ++/-- must be integer or pointer");
        self.type = t;
        return;
      }
      case NodeKind::Call:
        bind_call(id);
        return;
      case NodeKind::Index: {
        bind_expr(n.kids[0]);
        bind_expr(n.kids[1]);
        Node& self = ast_.at(id);
        TypeId bt = ast_.at(self.kids[0]).type;
        if (!is_pointer_like(ast_, bt)) fail(id, "subscripted value is not array/pointer");
        if (!is_int(ast_, ast_.at(self.kids[1]).type))
          fail(id, "array index must be integer");
        const Type& b = ast_.type(bt);
        self.type = b.kind == TypeKind::Array ? b.elem : b.pointee;
        return;
      }
      case NodeKind::Member: {
        bind_expr(n.kids[0]);
        Node& self = ast_.at(id);
        TypeId bt = ast_.at(self.kids[0]).type;
        const Type* b = &ast_.type(bt);
        if (self.aux) {  // ->
          if (b->kind != TypeKind::Ptr) fail(id, "-> on non-pointer");
          b = &ast_.type(b->pointee);
        }
        if (b->kind != TypeKind::Struct) fail(id, "member access on non-struct");
        const StructField* f = ast_.find_field(b->struct_id, self.text);
        if (!f) fail(id, "no field named '" + self.text + "'");
        self.type = f->type;
        return;
      }
      case NodeKind::Cast: {
        bind_expr(n.kids[0]);
        Node& self = ast_.at(id);
        TypeId st = decay(ast_.at(self.kids[0]).type);
        const Type& d = ast_.type(self.type);
        const Type& s = ast_.type(st);
        bool ok = (d.kind == TypeKind::Int && s.kind == TypeKind::Int) ||
                  (d.kind == TypeKind::Ptr && s.kind == TypeKind::Ptr) ||
                  (d.kind == TypeKind::Int && s.kind == TypeKind::Ptr) ||
                  (d.kind == TypeKind::Ptr && s.kind == TypeKind::Int);
        if (!ok) fail(id, "unsupported cast");
        return;
      }
      default:
        fail(id, "unexpected node in expression position");
    }
  }

  void bind_unary(NodeId id) {
    Node& n = ast_.at(id);
    bind_expr(n.kids[0]);
    Node& self = ast_.at(id);
    TypeId ot = ast_.at(self.kids[0]).type;
    switch (self.op) {
      case Op::Plus:
      case Op::Neg:
      case Op::BitNot:
        if (!is_int(ast_, ot)) fail(id, "integer operand required");
        self.type = promote(ast_, ot);
        return;
      case Op::LogNot:
        if (!is_int(ast_, ot) && !is_pointer_like(ast_, ot))
          fail(id, "scalar operand required");
        self.type = ast_.int_type(32, true);
        return;
      case Op::Deref: {
        const Type& t = ast_.type(ot);
        if (t.kind == TypeKind::Ptr)
          self.type = t.pointee;
        else if (t.kind == TypeKind::Array)
          self.type = t.elem;
        else
          fail(id, "dereference of non-pointer");
        if (ast_.type(self.type).kind == TypeKind::Void)
          fail(id, "dereference of void pointer");
        return;
      }
      case Op::AddrOf: {
        if (!is_lvalue(self.kids[0])) fail(id, "address of non-lvalue");
        if (ast_.type(ot).kind == TypeKind::Array)
          fail(id, "address-of an array is outside the subset");
        self.type = ast_.ptr_to(ot);
        return;
      }
      default:
        fail(id, "bad unary operator");
    }
  }

  void bind_binary(NodeId id) {
    Node& n = ast_.at(id);
    bind_expr(n.kids[0]);
    bind_expr(n.kids[1]);
    Node& self = ast_.at(id);
    TypeId lt = ast_.at(self.kids[0]).type;
    TypeId rt = ast_.at(self.kids[1]).type;
    bool lp = is_pointer_like(ast_, lt);
    bool rp = is_pointer_like(ast_, rt);
    switch (self.op) {
      case Op::Add:
        if (lp && is_int(ast_, rt)) { self.type = decay(lt); return; }
        if (rp && is_int(ast_, lt)) { self.type = decay(rt); return; }
        break;
      case Op::Sub:
        if (lp && is_int(ast_, rt)) { self.type = decay(lt); return; }
        if (lp && rp) { self.type = ast_.int_type(64, true); return; }
        break;
      case Op::Eq:
      case Op::Ne:
      case Op::Lt:
      case Op::Gt:
      case Op::Le:
      case Op::Ge:
        if (lp || rp) {
          if (!(lp || is_int(ast_, lt)) || !(rp || is_int(ast_, rt)))
            fail(id, "bad comparison operands");
          self.type = ast_.int_type(32, true);
          return;
        }
        break;
      case Op::LogAnd:
      case Op::LogOr:
        if ((lp || is_int(ast_, lt)) && (rp || is_int(ast_, rt))) {
          self.type = ast_.int_type(32, true);
          return;
        }
        fail(id, "bad logical operands");
      default:
        break;
    }
    if (!is_int(ast_, lt) || !is_int(ast_, rt))
      fail(id, "integer operands required for '" +
                   std::string(op_spelling(self.op)) + "'");
    switch (self.op) {
      case Op::Shl:
      case Op::Shr:
        self.type = promote(ast_, lt);
        return;
      case Op::Eq:
      case Op::Ne:
      case Op::Lt:
      case Op::Gt:
      case Op::Le:
      case Op::Ge:
        self.type = ast_.int_type(32, true);
        return;
      default:
        self.type = common_int_type(ast_, lt, rt);
        return;
    }
  }

  void bind_assign(NodeId id) {
    Node& n = ast_.at(id);
    bind_expr(n.kids[0]);
    bind_expr(n.kids[1]);
    Node& self = ast_.at(id);
    if (!is_lvalue(self.kids[0])) fail(id, "assignment to non-lvalue");
    TypeId lt = ast_.at(self.kids[0]).type;
    if (self.op == Op::Assign) {
      check_assignable(lt, self.kids[1]);
    } else {
      TypeId rt = ast_.at(self.kids[1]).type;
      bool ptr_step = ast_.type(lt).kind == TypeKind::Ptr &&
                      (self.op == Op::AddAssign || self.op == Op::SubAssign) &&
                      is_int(ast_, rt);
      if (!ptr_step && (!is_int(ast_, lt) || !is_int(ast_, rt)))
        fail(id, "integer operands required for compound assignment");
    }
    self.type = lt;
  }

  void bind_call(NodeId id) {
    Node& n = ast_.at(id);
    for (NodeId a : n.kids) bind_expr(a);
    Node& self = ast_.at(id);
    Builtin b = static_cast<Builtin>(self.aux);
    switch (b) {
      case Builtin::Printf: {
        if (self.kids.empty() ||
            ast_.at(self.kids[0]).kind != NodeKind::StrLit)
          fail(id, "printf needs a literal format string");
        self.type = ast_.int_type(32, true);
        return;
      }
      case Builtin::Malloc:
        if (!is_int(ast_, ast_.at(self.kids[0]).type))
          fail(id, "malloc size must be integer");
        self.type = ast_.ptr_to(ast_.void_type());
        return;
      case Builtin::Free:
        if (!is_pointer_like(ast_, ast_.at(self.kids[0]).type))
          fail(id, "free requires a pointer");
        self.type = ast_.void_type();
        return;
      case Builtin::LogRange:
      case Builtin::LogValue:
      case Builtin::LogAccess:
      case Builtin::LogFree:
        self.type = ast_.void_type();
        return;
      case Builtin::None:
        break;
    }
    NodeId fn = kNoNode;
    auto it = env_.front().find(self.text);
    if (it != env_.front().end() && ast_.at(it->second).kind == NodeKind::Function)
      fn = it->second;
    if (fn == kNoNode) fail(id, "call to undeclared function '" + self.text + "'");
    const Node& f = ast_.at(fn);
    size_t nparams = f.kids.size() - 1;
    if (self.kids.size() != nparams)
      fail(id, "wrong number of arguments to '" + self.text + "'");
    for (size_t i = 0; i < nparams; ++i)
      check_assignable(ast_.at(f.kids[i + 1]).type, self.kids[i]);
    self.decl = fn;
    self.type = f.type;
  }
};

}  // namespace

void bind(Ast& ast) {
  // clear previous binder results so rebinding after mutation is safe
  for (Node& n : ast.nodes) {
    if (n.kind == NodeKind::Ident) n.decl = kNoNode;
    if (n.kind != NodeKind::VarDecl && n.kind != NodeKind::Function &&
        n.kind != NodeKind::Cast && n.kind != NodeKind::IntLit &&
        n.kind != NodeKind::CharLit)
      if (n.kind != NodeKind::StructDecl) n.type = kNoType;
    n.scope = -1;
  }
  Binder b(ast);
  b.run();
}

}  // namespace ubf
