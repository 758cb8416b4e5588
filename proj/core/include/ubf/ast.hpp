#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ubf/error.hpp"
#include "ubf/source_loc.hpp"

namespace ubf {

using NodeId = int32_t;
inline constexpr NodeId kNoNode = -1;

using TypeId = int32_t;
inline constexpr TypeId kNoType = -1;

enum class TypeKind : uint8_t { Void, Int, Ptr, Array, Struct };

struct Type {
  TypeKind kind = TypeKind::Void;
  int width = 0;         // Int: bits (8/16/32/64)
  bool is_signed = false;
  TypeId pointee = kNoType;  // Ptr
  TypeId elem = kNoType;     // Array element
  int64_t count = 0;         // Array length
  int struct_id = -1;        // Struct
};

struct StructField {
  std::string name;
  TypeId type = kNoType;
  int64_t offset = 0;  // byte offset, System V layout
};

struct StructDef {
  std::string name;
  std::vector<StructField> fields;
  int64_t size = 0;
  int64_t align = 1;
};

enum class NodeKind : uint8_t {
  // expressions
  IntLit,
  CharLit,
  StrLit,
  Ident,
  Unary,
  Binary,
  Assign,
  IncDec,
  Call,
  Index,
  Member,
  Cast,
  InitList,
  // statements
  ExprStmt,
  DeclStmt,
  Block,
  If,
  While,
  For,
  Return,
  Break,
  Continue,
  Empty,
  // declarations
  VarDecl,
  Function,
  StructDecl,
};

enum class Op : uint8_t {
  None,
  // unary
  Plus,
  Neg,
  LogNot,
  BitNot,
  Deref,
  AddrOf,
  // binary
  Add,
  Sub,
  Mul,
  Div,
  Rem,
  Shl,
  Shr,
  Lt,
  Gt,
  Le,
  Ge,
  Eq,
  Ne,
  BitAnd,
  BitXor,
  BitOr,
  LogAnd,
  LogOr,
  // assignment
  Assign,
  AddAssign,
  SubAssign,
  MulAssign,
  DivAssign,
  RemAssign,
  ShlAssign,
  ShrAssign,
  AndAssign,
  XorAssign,
  OrAssign,
  // inc/dec
  Inc,
  Dec,
};

const char* op_spelling(Op op);

enum class Builtin : uint8_t {
  None,
  Printf,
  Malloc,
  Free,
  LogRange,   // __ubf_range(id, base, size)
  LogValue,   // __ubf_val(site, idx, v)
  LogAccess,  // __ubf_addr(site, idx, p)
  LogFree,    // __ubf_free(site, p)
};

enum class Storage : uint8_t { Global, Local, Param, Heap };

/// One node of the program tree. Children live in `kids` with a fixed
/// per-kind slot layout:
///   Unary:   [operand]              Binary/Assign: [lhs, rhs]
///   IncDec:  [lvalue]  (aux=1 for prefix)
///   Call:    [args...] (text=callee, aux=Builtin)
///   Index:   [base, index]          Member: [base] (text=field, aux=1 arrow)
///   Cast:    [operand] (type=target)
///   ExprStmt:[expr]                 DeclStmt: [VarDecl...]
///   Block:   [stmts...]             If: [cond, then, else?]
///   While:   [cond, body]           For: [init?, cond?, inc?, body]
///   Return:  [expr?]                VarDecl: [init?] (text=name)
///   Function:[body?, params...] (text=name, type=return type)
///   StructDecl: none (aux=struct id)
struct Node {
  NodeKind kind = NodeKind::Empty;
  SourceLoc loc{};
  std::vector<NodeId> kids;
  std::string text;
  Op op = Op::None;
  uint64_t ival = 0;  // literal bits
  int aux = 0;        // kind-specific flag (see above)
  // binder results
  TypeId type = kNoType;
  NodeId decl = kNoNode;  // Ident/Call resolution
  int scope = -1;         // scope introduced (Block/For/Function) or owning (VarDecl)
  Storage storage = Storage::Global;
};

struct Scope {
  int parent = -1;
  int depth = 0;
  NodeId owner = kNoNode;
};

/// Whole translation unit: node arena plus interned types, struct table and
/// binder results. Value semantics; copies are independent.
class Ast {
 public:
  std::vector<Node> nodes;
  std::vector<std::string> strings;   // string literals
  std::vector<std::string> preamble;  // #include lines, re-emitted verbatim
  std::vector<Type> types;
  std::vector<StructDef> structs;
  std::vector<NodeId> toplevel;   // source order, VarDecl/Function/StructDecl
  std::vector<NodeId> globals;    // VarDecl subset of toplevel
  std::vector<NodeId> functions;  // Function subset of toplevel
  std::vector<Scope> scopes;

  NodeId add(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<NodeId>(nodes.size() - 1);
  }
  Node& at(NodeId id) {
    check(id);
    return nodes[static_cast<size_t>(id)];
  }
  const Node& at(NodeId id) const {
    check(id);
    return nodes[static_cast<size_t>(id)];
  }
  bool has(NodeId id) const {
    return id >= 0 && static_cast<size_t>(id) < nodes.size();
  }

  // --- interned types ---
  TypeId intern(const Type& t);
  TypeId void_type();
  TypeId int_type(int width, bool is_signed);
  TypeId ptr_to(TypeId t);
  TypeId array_of(TypeId elem, int64_t count);
  TypeId struct_type(int struct_id);
  const Type& type(TypeId id) const { return types[static_cast<size_t>(id)]; }

  int64_t size_of(TypeId t) const;
  int64_t align_of(TypeId t) const;
  /// Recomputes field offsets / total size of a struct.
  void layout_struct(int struct_id);
  std::string type_name(TypeId t) const;

  int find_struct(const std::string& name) const;
  const StructField* find_field(int struct_id, const std::string& name) const;

  NodeId find_function(const std::string& name) const;

  /// Innermost full statement containing `id` (the node itself if it is a
  /// statement). kNoNode when the node sits outside any function body.
  NodeId enclosing_stmt(NodeId id) const;
  /// Parent node, kNoNode for toplevel entries.
  NodeId parent_of(NodeId id) const;
  /// Function whose body contains `id`, kNoNode otherwise.
  NodeId enclosing_function(NodeId id) const;

  /// Deep-copies the subtree rooted at `id`; returns the new root.
  NodeId clone_subtree(NodeId id);

  /// True if evaluating the subtree cannot change program state
  /// (no assignment, inc/dec or call).
  bool pure_expr(NodeId id) const;

  /// All identifiers declared anywhere in the unit (for fresh-name picking).
  std::vector<std::string> declared_names() const;

 private:
  void check(NodeId id) const {
    if (!has(id)) throw UnknownNode("unknown node id " + std::to_string(id));
  }
};

/// Structural equality ignoring SourceLocs and binder bookkeeping.
bool structurally_equal(const Ast& a, const Ast& b);

/// Resolves identifiers, assigns scopes and types every expression.
/// Must be re-run after any tree mutation. Throws ParseError on
/// unresolved names or type misuse.
void bind(Ast& ast);

bool is_int(const Ast& ast, TypeId t);
bool is_pointer_like(const Ast& ast, TypeId t);  // Ptr or Array
/// Integer promotion (rank below int promotes to int).
TypeId promote(Ast& ast, TypeId t);
/// Usual arithmetic conversions for two integer operands.
TypeId common_int_type(Ast& ast, TypeId a, TypeId b);

}  // namespace ubf
