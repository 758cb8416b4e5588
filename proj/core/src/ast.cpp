#include "ubf/ast.hpp"

#include <algorithm>
#include <set>

namespace ubf {

const char* op_spelling(Op op) {
  switch (op) {
    case Op::None: return "";
    case Op::Plus: return "+";
    case Op::Neg: return "-";
    case Op::LogNot: return "!";
    case Op::BitNot: return "~";
    case Op::Deref: return "*";
    case Op::AddrOf: return "&";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Rem: return "%";
    case Op::Shl: return "<<";
    case Op::Shr: return ">>";
    case Op::Lt: return "<";
    case Op::Gt: return ">";
    case Op::Le: return "<=";
    case Op::Ge: return ">=";
    case Op::Eq: return "==";
    case Op::Ne: return "!=";
    case Op::BitAnd: return "&";
    case Op::BitXor: return "^";
    case Op::BitOr: return "|";
    case Op::LogAnd: return "&&";
    case Op::LogOr: return "||";
    case Op::Assign: return "=";
    case Op::AddAssign: return "+=";
    case Op::SubAssign: return "-=";
    case Op::MulAssign: return "*=";
    case Op::DivAssign: return "/=";
    case Op::RemAssign: return "%=";
    case Op::ShlAssign: return "<<=";
    case Op::ShrAssign: return ">>=";
    case Op::AndAssign: return "&=";
    case Op::XorAssign: return "^=";
    case Op::OrAssign: return "|=";
    case Op::Inc: return "++";
    case Op::Dec: return "--";
  }
  return "";
}

TypeId Ast::intern(const Type& t) {
  for (size_t i = 0; i < types.size(); ++i) {
    const Type& u = types[i];
    if (u.kind == t.kind && u.width == t.width && u.is_signed == t.is_signed &&
        u.pointee == t.pointee && u.elem == t.elem && u.count == t.count &&
        u.struct_id == t.struct_id)
      return static_cast<TypeId>(i);
  }
  types.push_back(t);
  return static_cast<TypeId>(types.size() - 1);
}

TypeId Ast::void_type() { return intern(Type{TypeKind::Void}); }

TypeId Ast::int_type(int width, bool is_signed) {
  Type t;
  t.kind = TypeKind::Int;
  t.width = width;
  t.is_signed = is_signed;
  return intern(t);
}

TypeId Ast::ptr_to(TypeId p) {
  Type t;
  t.kind = TypeKind::Ptr;
  t.pointee = p;
  return intern(t);
}

TypeId Ast::array_of(TypeId elem, int64_t count) {
  Type t;
  t.kind = TypeKind::Array;
  t.elem = elem;
  t.count = count;
  return intern(t);
}

TypeId Ast::struct_type(int struct_id) {
  Type t;
  t.kind = TypeKind::Struct;
  t.struct_id = struct_id;
  return intern(t);
}

int64_t Ast::size_of(TypeId id) const {
  const Type& t = type(id);
  switch (t.kind) {
    case TypeKind::Void: return 1;
    case TypeKind::Int: return t.width / 8;
    case TypeKind::Ptr: return 8;
    case TypeKind::Array: return size_of(t.elem) * t.count;
    case TypeKind::Struct: return structs[static_cast<size_t>(t.struct_id)].size;
  }
  return 0;
}

int64_t Ast::align_of(TypeId id) const {
  const Type& t = type(id);
  switch (t.kind) {
    case TypeKind::Void: return 1;
    case TypeKind::Int: return t.width / 8;
    case TypeKind::Ptr: return 8;
    case TypeKind::Array: return align_of(t.elem);
    case TypeKind::Struct: return structs[static_cast<size_t>(t.struct_id)].align;
  }
  return 1;
}

void Ast::layout_struct(int struct_id) {
  StructDef& s = structs[static_cast<size_t>(struct_id)];
  int64_t off = 0;
  int64_t align = 1;
  for (StructField& f : s.fields) {
    int64_t a = align_of(f.type);
    off = (off + a - 1) / a * a;
    f.offset = off;
    off += size_of(f.type);
    align = std::max(align, a);
  }
  s.align = align;
  s.size = (off + align - 1) / align * align;
  if (s.size == 0) s.size = align;
}

std::string Ast::type_name(TypeId id) const {
  const Type& t = type(id);
  switch (t.kind) {
    case TypeKind::Void: return "void";
    case TypeKind::Int:
      switch (t.width) {
        case 8: return t.is_signed ? "char" : "unsigned char";
        case 16: return t.is_signed ? "short" : "unsigned short";
        case 32: return t.is_signed ? "int" : "unsigned int";
        default: return t.is_signed ? "long long" : "unsigned long long";
      }
    case TypeKind::Ptr: return type_name(t.pointee) + "*";
    case TypeKind::Array:
      return type_name(t.elem) + "[" + std::to_string(t.count) + "]";
    case TypeKind::Struct:
      return "struct " + structs[static_cast<size_t>(t.struct_id)].name;
  }
  return "?";
}

int Ast::find_struct(const std::string& name) const {
  for (size_t i = 0; i < structs.size(); ++i)
    if (structs[i].name == name) return static_cast<int>(i);
  return -1;
}

const StructField* Ast::find_field(int struct_id, const std::string& name) const {
  for (const StructField& f : structs[static_cast<size_t>(struct_id)].fields)
    if (f.name == name) return &f;
  return nullptr;
}

NodeId Ast::find_function(const std::string& name) const {
  for (NodeId f : functions)
    if (at(f).text == name && !at(f).kids.empty() && at(f).kids[0] != kNoNode)
      return f;
  for (NodeId f : functions)
    if (at(f).text == name) return f;
  return kNoNode;
}

namespace {

void build_parents(const Ast& ast, std::vector<NodeId>& parent) {
  parent.assign(ast.nodes.size(), kNoNode);
  for (size_t i = 0; i < ast.nodes.size(); ++i)
    for (NodeId k : ast.nodes[i].kids)
      if (k != kNoNode) parent[static_cast<size_t>(k)] = static_cast<NodeId>(i);
}

bool is_stmt_kind(NodeKind k) {
  switch (k) {
    case NodeKind::ExprStmt:
    case NodeKind::DeclStmt:
    case NodeKind::Block:
    case NodeKind::If:
    case NodeKind::While:
    case NodeKind::For:
    case NodeKind::Return:
    case NodeKind::Break:
    case NodeKind::Continue:
    case NodeKind::Empty:
      return true;
    default:
      return false;
  }
}

}  // namespace

NodeId Ast::parent_of(NodeId id) const {
  check(id);
  std::vector<NodeId> parent;
  build_parents(*this, parent);
  return parent[static_cast<size_t>(id)];
}

NodeId Ast::enclosing_stmt(NodeId id) const {
  check(id);
  std::vector<NodeId> parent;
  build_parents(*this, parent);
  NodeId cur = id;
  while (cur != kNoNode) {
    NodeId p = parent[static_cast<size_t>(cur)];
    if (is_stmt_kind(at(cur).kind)) {
      // A statement nested in another statement is its own anchor, except
      // that the query for a plain expression walks up to the first stmt.
      if (p != kNoNode && (at(p).kind == NodeKind::Block)) return cur;
      if (p != kNoNode && is_stmt_kind(at(p).kind)) { cur = p; continue; }
      if (p == kNoNode) return kNoNode;  // toplevel decl
    }
    cur = p;
  }
  return kNoNode;
}

NodeId Ast::enclosing_function(NodeId id) const {
  check(id);
  std::vector<NodeId> parent;
  build_parents(*this, parent);
  NodeId cur = id;
  while (cur != kNoNode) {
    if (at(cur).kind == NodeKind::Function) return cur;
    cur = parent[static_cast<size_t>(cur)];
  }
  return kNoNode;
}

NodeId Ast::clone_subtree(NodeId id) {
  Node copy = at(id);
  for (NodeId& k : copy.kids)
    if (k != kNoNode) k = clone_subtree(k);
  return add(std::move(copy));
}

bool Ast::pure_expr(NodeId id) const {
  const Node& n = at(id);
  switch (n.kind) {
    case NodeKind::Assign:
    case NodeKind::IncDec:
    case NodeKind::Call:
      return false;
    default:
      break;
  }
  for (NodeId k : n.kids)
    if (k != kNoNode && !pure_expr(k)) return false;
  return true;
}

std::vector<std::string> Ast::declared_names() const {
  std::set<std::string> out;
  for (const Node& n : nodes) {
    if (n.kind == NodeKind::VarDecl || n.kind == NodeKind::Function)
      out.insert(n.text);
  }
  for (const StructDef& s : structs) out.insert(s.name);
  return {out.begin(), out.end()};
}

namespace {

std::string type_signature(const Ast& ast, TypeId id) {
  if (id == kNoType) return "_";
  const Type& t = ast.type(id);
  switch (t.kind) {
    case TypeKind::Void: return "v";
    case TypeKind::Int:
      return (t.is_signed ? "i" : "u") + std::to_string(t.width);
    case TypeKind::Ptr: return "p" + type_signature(ast, t.pointee);
    case TypeKind::Array:
      return "a" + std::to_string(t.count) + type_signature(ast, t.elem);
    case TypeKind::Struct:
      return "s" + ast.structs[static_cast<size_t>(t.struct_id)].name;
  }
  return "?";
}

bool node_equal(const Ast& a, NodeId na, const Ast& b, NodeId nb) {
  if ((na == kNoNode) != (nb == kNoNode)) return false;
  if (na == kNoNode) return true;
  const Node& x = a.at(na);
  const Node& y = b.at(nb);
  if (x.kind != y.kind || x.op != y.op || x.text != y.text || x.aux != y.aux)
    return false;
  if (x.kind == NodeKind::IntLit || x.kind == NodeKind::CharLit) {
    if (x.ival != y.ival) return false;
  }
  if (x.kind == NodeKind::StrLit) {
    if (a.strings[static_cast<size_t>(x.aux)] != b.strings[static_cast<size_t>(y.aux)])
      return false;
  }
  // declared types matter for decls and casts
  if (x.kind == NodeKind::VarDecl || x.kind == NodeKind::Cast ||
      x.kind == NodeKind::Function) {
    if (type_signature(a, x.type) != type_signature(b, y.type)) return false;
  }
  if (x.kids.size() != y.kids.size()) return false;
  for (size_t i = 0; i < x.kids.size(); ++i)
    if (!node_equal(a, x.kids[i], b, y.kids[i])) return false;
  return true;
}

}  // namespace

bool structurally_equal(const Ast& a, const Ast& b) {
  if (a.preamble != b.preamble) return false;
  if (a.toplevel.size() != b.toplevel.size()) return false;
  if (a.structs.size() != b.structs.size()) return false;
  for (size_t i = 0; i < a.structs.size(); ++i) {
    const StructDef& sa = a.structs[i];
    const StructDef& sb = b.structs[i];
    if (sa.name != sb.name || sa.fields.size() != sb.fields.size()) return false;
    for (size_t j = 0; j < sa.fields.size(); ++j) {
      if (sa.fields[j].name != sb.fields[j].name) return false;
      if (type_signature(a, sa.fields[j].type) !=
          type_signature(b, sb.fields[j].type))
        return false;
    }
  }
  for (size_t i = 0; i < a.toplevel.size(); ++i)
    if (!node_equal(a, a.toplevel[i], b, b.toplevel[i])) return false;
  return true;
}

bool is_int(const Ast& ast, TypeId t) {
  return t != kNoType && ast.type(t).kind == TypeKind::Int;
}

bool is_pointer_like(const Ast& ast, TypeId t) {
  if (t == kNoType) return false;
  TypeKind k = ast.type(t).kind;
  return k == TypeKind::Ptr || k == TypeKind::Array;
}

TypeId promote(Ast& ast, TypeId t) {
  const Type& ty = ast.type(t);
  if (ty.kind != TypeKind::Int) return t;
  if (ty.width < 32) return ast.int_type(32, true);
  return t;
}

TypeId common_int_type(Ast& ast, TypeId a, TypeId b) {
  TypeId pa = promote(ast, a);
  TypeId pb = promote(ast, b);
  const Type& ta = ast.type(pa);
  const Type& tb = ast.type(pb);
  int width = std::max(ta.width, tb.width);
  bool is_signed;
  if (ta.is_signed == tb.is_signed) {
    is_signed = ta.is_signed;
  } else if (ta.width == tb.width) {
    is_signed = false;  // unsigned wins at equal rank
  } else {
    // wider type wins; the narrower converts
    is_signed = (ta.width > tb.width) ? ta.is_signed : tb.is_signed;
  }
  return ast.int_type(width, is_signed);
}

}  // namespace ubf
