#include "ubf/printer.hpp"

namespace ubf {

namespace {

int prec_of(const Ast& ast, NodeId id) {
  const Node& n = ast.at(id);
  switch (n.kind) {
    case NodeKind::IntLit:
    case NodeKind::CharLit:
    case NodeKind::StrLit:
    case NodeKind::Ident:
      return 14;
    case NodeKind::Index:
    case NodeKind::Member:
    case NodeKind::Call:
      return 13;
    case NodeKind::IncDec:
      return n.aux ? 12 : 13;
    case NodeKind::Unary:
    case NodeKind::Cast:
      return 12;
    case NodeKind::Binary:
      switch (n.op) {
        case Op::Mul:
        case Op::Div:
        case Op::Rem: return 11;
        case Op::Add:
        case Op::Sub: return 10;
        case Op::Shl:
        case Op::Shr: return 9;
        case Op::Lt:
        case Op::Gt:
        case Op::Le:
        case Op::Ge: return 8;
        case Op::Eq:
        case Op::Ne: return 7;
        case Op::BitAnd: return 6;
        case Op::BitXor: return 5;
        case Op::BitOr: return 4;
        case Op::LogAnd: return 3;
        case Op::LogOr: return 2;
        default: return 2;
      }
    case NodeKind::Assign:
      return 1;
    default:
      return 0;
  }
}

class Printer {
 public:
  explicit Printer(const Ast& ast) : ast_(ast) {
    out_.locs.resize(ast.nodes.size());
  }

  Emitted run() {
    for (const std::string& line : ast_.preamble) {
      raw(line);
      newline();
    }
    for (NodeId id : ast_.toplevel) {
      const Node& n = ast_.at(id);
      switch (n.kind) {
        case NodeKind::StructDecl:
          print_struct(n.aux);
          break;
        case NodeKind::VarDecl:
          mark(id);
          print_var_decl(id);
          raw(";");
          newline();
          break;
        case NodeKind::Function:
          print_function(id);
          break;
        default:
          break;
      }
    }
    return std::move(out_);
  }

 private:
  const Ast& ast_;
  Emitted out_;
  int line_ = 1;
  int col_ = 1;
  int indent_ = 0;

  void raw(const std::string& s) {
    out_.text += s;
    col_ += static_cast<int>(s.size());
  }
  void newline() {
    out_.text += '\n';
    ++line_;
    col_ = 1;
  }
  void indent() { raw(std::string(static_cast<size_t>(indent_) * 2, ' ')); }
  void mark(NodeId id) { out_.locs[static_cast<size_t>(id)] = {line_, col_}; }

  // base-type keyword, pointer stars, name, optional array extent
  void print_declarator(TypeId type, const std::string& name) {
    TypeId t = type;
    int64_t extent = -1;
    if (ast_.type(t).kind == TypeKind::Array) {
      extent = ast_.type(t).count;
      t = ast_.type(t).elem;
    }
    int stars = 0;
    while (ast_.type(t).kind == TypeKind::Ptr) {
      ++stars;
      t = ast_.type(t).pointee;
    }
    raw(ast_.type_name(t));
    raw(" ");
    raw(std::string(static_cast<size_t>(stars), '*'));
    raw(name);
    if (extent >= 0) raw("[" + std::to_string(extent) + "]");
  }

  void print_struct(int sid) {
    const StructDef& s = ast_.structs[static_cast<size_t>(sid)];
    raw("struct " + s.name + " {");
    newline();
    for (const StructField& f : s.fields) {
      raw("  ");
      print_declarator(f.type, f.name);
      raw(";");
      newline();
    }
    raw("};");
    newline();
  }

  void print_var_decl(NodeId id) {
    const Node& n = ast_.at(id);
    print_declarator(n.type, n.text);
    if (n.kids[0] != kNoNode) {
      raw(" = ");
      print_init(n.kids[0]);
    }
  }

  void print_init(NodeId id) {
    const Node& n = ast_.at(id);
    if (n.kind == NodeKind::InitList) {
      mark(id);
      raw("{");
      for (size_t i = 0; i < n.kids.size(); ++i) {
        if (i) raw(", ");
        print_init(n.kids[i]);
      }
      raw("}");
      return;
    }
    print_expr(id, 1);
  }

  void print_function(NodeId id) {
    const Node& n = ast_.at(id);
    mark(id);
    TypeId ret = n.type;
    int stars = 0;
    TypeId t = ret;
    while (ast_.type(t).kind == TypeKind::Ptr) {
      ++stars;
      t = ast_.type(t).pointee;
    }
    raw(ast_.type_name(t) + " " + std::string(static_cast<size_t>(stars), '*') +
        n.text + "(");
    for (size_t i = 1; i < n.kids.size(); ++i) {
      if (i > 1) raw(", ");
      const Node& p = ast_.at(n.kids[i]);
      mark(n.kids[i]);
      print_declarator(p.type, p.text);
    }
    raw(")");
    if (n.kids[0] == kNoNode) {
      raw(";");
      newline();
      return;
    }
    raw(" ");
    print_block(n.kids[0], /*inline_open=*/true);
  }

  void print_block(NodeId id, bool inline_open) {
    const Node& b = ast_.at(id);
    if (!inline_open) indent();
    mark(id);
    raw("{");
    newline();
    ++indent_;
    for (NodeId k : b.kids) print_stmt(k);
    --indent_;
    indent();
    raw("}");
    newline();
  }

  void print_stmt(NodeId id) {
    const Node& n = ast_.at(id);
    switch (n.kind) {
      case NodeKind::Block:
        print_block(id, false);
        return;
      case NodeKind::Empty:
        indent();
        mark(id);
        raw(";");
        newline();
        return;
      case NodeKind::ExprStmt:
        indent();
        mark(id);
        print_expr(n.kids[0], 0);
        raw(";");
        newline();
        return;
      case NodeKind::DeclStmt:
        indent();
        mark(id);
        print_decl_stmt_inline(id);
        raw(";");
        newline();
        return;
      case NodeKind::Return:
        indent();
        mark(id);
        raw("return");
        if (n.kids[0] != kNoNode) {
          raw(" ");
          print_expr(n.kids[0], 1);
        }
        raw(";");
        newline();
        return;
      case NodeKind::Break:
      case NodeKind::Continue:
        indent();
        mark(id);
        raw(n.kind == NodeKind::Break ? "break;" : "continue;");
        newline();
        return;
      case NodeKind::If:
        indent();
        print_if(id);
        return;
      case NodeKind::While:
        indent();
        mark(id);
        raw("while (");
        print_expr(n.kids[0], 1);
        raw(") ");
        print_block(n.kids[1], true);
        return;
      case NodeKind::For:
        indent();
        mark(id);
        raw("for (");
        if (n.kids[0] != kNoNode) {
          const Node& init = ast_.at(n.kids[0]);
          mark(n.kids[0]);
          if (init.kind == NodeKind::DeclStmt)
            print_decl_stmt_inline(n.kids[0]);
          else
            print_expr(init.kids[0], 0);
        }
        raw("; ");
        if (n.kids[1] != kNoNode) print_expr(n.kids[1], 1);
        raw("; ");
        if (n.kids[2] != kNoNode) print_expr(n.kids[2], 0);
        raw(") ");
        print_block(n.kids[3], true);
        return;
      default:
        return;
    }
  }

  void print_decl_stmt_inline(NodeId id) {
    const Node& n = ast_.at(id);
    for (size_t i = 0; i < n.kids.size(); ++i) {
      if (i) raw(", ");
      mark(n.kids[i]);
      if (i == 0) {
        print_var_decl(n.kids[i]);
      } else {
        // shared base type already printed; re-print stars/name only
        const Node& v = ast_.at(n.kids[i]);
        TypeId t = v.type;
        int64_t extent = -1;
        if (ast_.type(t).kind == TypeKind::Array) {
          extent = ast_.type(t).count;
          t = ast_.type(t).elem;
        }
        int stars = 0;
        while (ast_.type(t).kind == TypeKind::Ptr) {
          ++stars;
          t = ast_.type(t).pointee;
        }
        raw(std::string(static_cast<size_t>(stars), '*') + v.text);
        if (extent >= 0) raw("[" + std::to_string(extent) + "]");
        if (v.kids[0] != kNoNode) {
          raw(" = ");
          print_init(v.kids[0]);
        }
      }
    }
  }

  void print_if(NodeId id) {
    const Node& n = ast_.at(id);
    mark(id);
    raw("if (");
    print_expr(n.kids[0], 1);
    raw(") ");
    print_block(n.kids[1], true);
    if (n.kids[2] != kNoNode) {
      // splice "else" onto the closing brace line
      out_.text.pop_back();  // newline after '}'
      --line_;
      col_ = 1;  // recompute below
      size_t last_nl = out_.text.rfind('\n');
      col_ = static_cast<int>(out_.text.size() - (last_nl + 1)) + 1;
      raw(" else ");
      const Node& e = ast_.at(n.kids[2]);
      if (e.kind == NodeKind::If) {
        print_if(n.kids[2]);
      } else {
        print_block(n.kids[2], true);
      }
    }
  }

  void print_int_lit(const Node& n) {
    raw(std::to_string(n.ival));
    const Type& t = ast_.type(n.type);
    if (t.width == 32 && !t.is_signed) raw("u");
    if (t.width == 64 && t.is_signed) raw("ll");
    if (t.width == 64 && !t.is_signed) raw("ull");
  }

  void print_char_lit(const Node& n) {
    char c = static_cast<char>(n.ival);
    std::string body;
    switch (c) {
      case '\n': body = "\\n"; break;
      case '\t': body = "\\t"; break;
      case '\r': body = "\\r"; break;
      case '\0': body = "\\0"; break;
      case '\\': body = "\\\\"; break;
      case '\'': body = "\\'"; break;
      default: body = std::string(1, c); break;
    }
    raw("'" + body + "'");
  }

  void print_str_lit(const Node& n) {
    const std::string& s = ast_.strings[static_cast<size_t>(n.aux)];
    std::string body;
    for (char c : s) {
      switch (c) {
        case '\n': body += "\\n"; break;
        case '\t': body += "\\t"; break;
        case '\r': body += "\\r"; break;
        case '\0': body += "\\0"; break;
        case '\\': body += "\\\\"; break;
        case '"': body += "\\\""; break;
        default: body += c; break;
      }
    }
    raw("\"" + body + "\"");
  }

  // A unary minus/plus directly followed by another sign would lex as
  // -- or ++, so such operands keep their parentheses.
  bool needs_sign_parens(Op outer, NodeId operand) {
    const Node& n = ast_.at(operand);
    if (outer == Op::Neg)
      return (n.kind == NodeKind::Unary && n.op == Op::Neg) ||
             (n.kind == NodeKind::IncDec && n.op == Op::Dec && n.aux);
    if (outer == Op::Plus)
      return (n.kind == NodeKind::Unary && n.op == Op::Plus) ||
             (n.kind == NodeKind::IncDec && n.op == Op::Inc && n.aux);
    return false;
  }

  void print_expr(NodeId id, int min_prec) {
    const Node& n = ast_.at(id);
    int p = prec_of(ast_, id);
    bool parens = p < min_prec;
    mark(id);
    if (parens) raw("(");
    switch (n.kind) {
      case NodeKind::IntLit:
        print_int_lit(n);
        break;
      case NodeKind::CharLit:
        print_char_lit(n);
        break;
      case NodeKind::StrLit:
        print_str_lit(n);
        break;
      case NodeKind::Ident:
        raw(n.text);
        break;
      case NodeKind::Unary: {
        raw(op_spelling(n.op));
        if (needs_sign_parens(n.op, n.kids[0])) {
          // reuse the paren path by demanding an impossible precedence
          print_expr(n.kids[0], 15);
        } else {
          print_expr(n.kids[0], 12);
        }
        break;
      }
      case NodeKind::Binary:
        print_expr(n.kids[0], p);
        raw(std::string(" ") + op_spelling(n.op) + " ");
        print_expr(n.kids[1], p + 1);
        break;
      case NodeKind::Assign:
        print_expr(n.kids[0], 2);
        raw(std::string(" ") + op_spelling(n.op) + " ");
        print_expr(n.kids[1], 1);
        break;
      case NodeKind::IncDec:
        if (n.aux) {
          raw(op_spelling(n.op));
          print_expr(n.kids[0], 12);
        } else {
          print_expr(n.kids[0], 13);
          raw(op_spelling(n.op));
        }
        break;
      case NodeKind::Call: {
        raw(n.text + "(");
        for (size_t i = 0; i < n.kids.size(); ++i) {
          if (i) raw(", ");
          print_expr(n.kids[i], 1);
        }
        raw(")");
        break;
      }
      case NodeKind::Index:
        print_expr(n.kids[0], 13);
        raw("[");
        print_expr(n.kids[1], 1);
        raw("]");
        break;
      case NodeKind::Member:
        print_expr(n.kids[0], 13);
        raw(n.aux ? "->" : ".");
        raw(n.text);
        break;
      case NodeKind::Cast: {
        TypeId t = n.type;
        int stars = 0;
        while (ast_.type(t).kind == TypeKind::Ptr) {
          ++stars;
          t = ast_.type(t).pointee;
        }
        raw("(" + ast_.type_name(t) + std::string(static_cast<size_t>(stars), '*') + ")");
        print_expr(n.kids[0], 12);
        break;
      }
      default:
        break;
    }
    if (parens) raw(")");
  }
};

}  // namespace

Emitted emit_program(const Ast& ast) { return Printer(ast).run(); }

std::string print_program(const Ast& ast) { return Printer(ast).run().text; }

}  // namespace ubf
