#include "ubf/parser.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace ubf {

namespace {

enum class Tok : uint8_t {
  End,
  Ident,
  Number,
  CharLit,
  StrLit,
  Punct,
  Keyword,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  uint64_t value = 0;
  bool suf_unsigned = false;
  int suf_long = 0;
  bool is_hex = false;
  SourceLoc loc;
};

const std::set<std::string> kKeywords = {
    "int",    "char",   "short",  "long",     "signed", "unsigned",
    "void",   "struct", "if",     "else",     "while",  "for",
    "return", "break",  "continue"};

// Recognized so we can reject them with a precise message instead of a
// generic identifier error.
const std::set<std::string> kRejected = {
    "goto",   "union",    "enum",   "switch",  "case",    "default",
    "do",     "typedef",  "static", "extern",  "const",   "volatile",
    "float",  "double",   "sizeof", "register", "auto",   "inline",
    "_Bool",  "restrict"};

class Lexer {
 public:
  Lexer(const std::string& src, std::vector<std::string>* preamble)
      : src_(src), preamble_(preamble) {
    strip_directives();
    next();
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    next();
    return t;
  }

 private:
  std::string src_;
  std::vector<std::string>* preamble_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;

  // #include lines pass through verbatim; any other directive is out of
  // the subset. The line is blanked in place so positions stay stable.
  void strip_directives() {
    size_t i = 0;
    int line = 1;
    while (i < src_.size()) {
      size_t bol = i;
      size_t eol = src_.find('\n', i);
      if (eol == std::string::npos) eol = src_.size();
      size_t j = bol;
      while (j < eol && (src_[j] == ' ' || src_[j] == '\t')) ++j;
      if (j < eol && src_[j] == '#') {
        std::string text = src_.substr(bol, eol - bol);
        if (text.compare(j - bol, 8, "#include") == 0) {
          preamble_->push_back(text);
          for (size_t k = bol; k < eol; ++k) src_[k] = ' ';
        } else {
          throw ParseError({line, static_cast<int>(j - bol + 1)},
                           "preprocessor directive outside subset: " + text);
        }
      }
      i = eol + 1;
      ++line;
    }
  }

  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char ahead(size_t n) const {
    return pos_ + n < src_.size() ? src_[pos_ + n] : '\0';
  }
  void bump() {
    if (cur() == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    for (;;) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '/' && ahead(1) == '/') {
        while (cur() != '\n' && cur() != '\0') bump();
      } else if (c == '/' && ahead(1) == '*') {
        bump();
        bump();
        while (!(cur() == '*' && ahead(1) == '/')) {
          if (cur() == '\0')
            throw ParseError({line_, col_}, "unterminated comment");
          bump();
        }
        bump();
        bump();
      } else {
        return;
      }
    }
  }

  char read_escape() {
    bump();  // backslash
    char c = cur();
    bump();
    switch (c) {
      case 'n': return '\n';
      case 't': return '\t';
      case 'r': return '\r';
      case '0': return '\0';
      case '\\': return '\\';
      case '\'': return '\'';
      case '"': return '"';
      default:
        throw ParseError({line_, col_}, std::string("unsupported escape \\") + c);
    }
  }

  void next() {
    skip_space();
    tok_ = Token{};
    tok_.loc = {line_, col_};
    char c = cur();
    if (c == '\0') {
      tok_.kind = Tok::End;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
        id += cur();
        bump();
      }
      if (kRejected.count(id))
        throw ParseError(tok_.loc, "construct outside subset: '" + id + "'");
      tok_.kind = kKeywords.count(id) ? Tok::Keyword : Tok::Ident;
      tok_.text = id;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = 0;
      bool hex = (c == '0' && (ahead(1) == 'x' || ahead(1) == 'X'));
      if (hex) {
        bump();
        bump();
        if (!std::isxdigit(static_cast<unsigned char>(cur())))
          throw ParseError(tok_.loc, "malformed hex literal");
        while (std::isxdigit(static_cast<unsigned char>(cur()))) {
          char d = cur();
          v = v * 16 + static_cast<uint64_t>(
                           std::isdigit(static_cast<unsigned char>(d))
                               ? d - '0'
                               : std::tolower(d) - 'a' + 10);
          bump();
        }
      } else {
        while (std::isdigit(static_cast<unsigned char>(cur()))) {
          v = v * 10 + static_cast<uint64_t>(cur() - '0');
          bump();
        }
      }
      tok_.kind = Tok::Number;
      tok_.value = v;
      tok_.is_hex = hex;
      for (;;) {
        char s = cur();
        if (s == 'u' || s == 'U') {
          tok_.suf_unsigned = true;
          bump();
        } else if (s == 'l' || s == 'L') {
          ++tok_.suf_long;
          bump();
        } else {
          break;
        }
      }
      if (std::isalpha(static_cast<unsigned char>(cur())))
        throw ParseError({line_, col_}, "malformed numeric literal suffix");
      return;
    }
    if (c == '\'') {
      bump();
      char v;
      if (cur() == '\\') {
        v = read_escape();
      } else {
        v = cur();
        bump();
      }
      if (cur() != '\'')
        throw ParseError({line_, col_}, "unterminated character literal");
      bump();
      tok_.kind = Tok::CharLit;
      tok_.value = static_cast<uint64_t>(static_cast<unsigned char>(v));
      return;
    }
    if (c == '"') {
      bump();
      std::string s;
      while (cur() != '"') {
        if (cur() == '\0' || cur() == '\n')
          throw ParseError({line_, col_}, "unterminated string literal");
        if (cur() == '\\')
          s += read_escape();
        else {
          s += cur();
          bump();
        }
      }
      bump();
      tok_.kind = Tok::StrLit;
      tok_.text = s;
      return;
    }
    // punctuation, longest match first
    static const char* three[] = {"<<=", ">>="};
    static const char* two[] = {"<<", ">>", "<=", ">=", "==", "!=", "&&",
                                "||", "+=", "-=", "*=", "/=", "%=", "&=",
                                "|=", "^=", "++", "--", "->"};
    for (const char* p : three) {
      if (c == p[0] && ahead(1) == p[1] && ahead(2) == p[2]) {
        tok_.kind = Tok::Punct;
        tok_.text = p;
        bump();
        bump();
        bump();
        return;
      }
    }
    for (const char* p : two) {
      if (c == p[0] && ahead(1) == p[1]) {
        tok_.kind = Tok::Punct;
        tok_.text = p;
        bump();
        bump();
        return;
      }
    }
    static const std::string singles = "+-*/%<>=!~&|^()[]{};,.?:";
    if (singles.find(c) != std::string::npos) {
      tok_.kind = Tok::Punct;
      tok_.text = std::string(1, c);
      bump();
      return;
    }
    throw ParseError(tok_.loc, std::string("unexpected character '") + c + "'");
  }
};

struct BuiltinSig {
  Builtin id;
  int argc;  // -1 variadic
};

const std::map<std::string, BuiltinSig> kBuiltins = {
    {"printf", {Builtin::Printf, -1}},
    {"malloc", {Builtin::Malloc, 1}},
    {"free", {Builtin::Free, 1}},
    {"__ubf_range", {Builtin::LogRange, 3}},
    {"__ubf_val", {Builtin::LogValue, 3}},
    {"__ubf_addr", {Builtin::LogAccess, 3}},
    {"__ubf_free", {Builtin::LogFree, 2}},
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src, &ast_.preamble) {}

  Ast run() {
    while (lex_.peek().kind != Tok::End) parse_toplevel();
    bind(ast_);
    return std::move(ast_);
  }

 private:
  Ast ast_;
  Lexer lex_;

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(lex_.peek().loc, msg);
  }
  bool at_punct(const std::string& p) {
    return lex_.peek().kind == Tok::Punct && lex_.peek().text == p;
  }
  bool at_kw(const std::string& k) {
    return lex_.peek().kind == Tok::Keyword && lex_.peek().text == k;
  }
  Token expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    return lex_.take();
  }
  Token expect_ident() {
    if (lex_.peek().kind != Tok::Ident) fail("expected identifier");
    return lex_.take();
  }

  bool at_type_start() {
    const Token& t = lex_.peek();
    if (t.kind != Tok::Keyword) return false;
    return t.text == "int" || t.text == "char" || t.text == "short" ||
           t.text == "long" || t.text == "signed" || t.text == "unsigned" ||
           t.text == "void" || t.text == "struct";
  }

  // Base type: int keywords in any standard order, void, or struct tag.
  TypeId parse_base_type() {
    if (at_kw("void")) {
      lex_.take();
      return ast_.void_type();
    }
    if (at_kw("struct")) {
      Token kw = lex_.take();
      Token name = expect_ident();
      int sid = ast_.find_struct(name.text);
      if (sid < 0)
        throw ParseError(kw.loc, "unknown struct '" + name.text + "'");
      return ast_.struct_type(sid);
    }
    bool saw_signed = false, saw_unsigned = false, saw_any = false;
    int longs = 0;
    bool saw_int = false, saw_char = false, saw_short = false;
    while (lex_.peek().kind == Tok::Keyword) {
      const std::string& t = lex_.peek().text;
      if (t == "signed") saw_signed = true;
      else if (t == "unsigned") saw_unsigned = true;
      else if (t == "long") ++longs;
      else if (t == "short") saw_short = true;
      else if (t == "char") saw_char = true;
      else if (t == "int") saw_int = true;
      else break;
      saw_any = true;
      lex_.take();
    }
    if (!saw_any) fail("expected type");
    bool is_signed = !saw_unsigned;
    int width = 32;
    if (saw_char) width = 8;
    else if (saw_short) width = 16;
    else if (longs > 0) width = 64;
    (void)saw_int;
    (void)saw_signed;
    return ast_.int_type(width, is_signed);
  }

  // '*'* name optionally followed by one array extent.
  struct Declarator {
    TypeId type;
    std::string name;
    SourceLoc loc;
  };
  Declarator parse_declarator(TypeId base) {
    TypeId t = base;
    SourceLoc loc = lex_.peek().loc;
    while (at_punct("*")) {
      lex_.take();
      t = ast_.ptr_to(t);
    }
    Token name = expect_ident();
    if (at_punct("[")) {
      lex_.take();
      if (lex_.peek().kind != Tok::Number)
        fail("array extent must be an integer literal");
      Token n = lex_.take();
      expect_punct("]");
      if (at_punct("["))
        fail("multi-dimensional arrays outside subset");
      if (n.value == 0 || n.value > (1u << 30))
        throw ParseError(n.loc, "unsupported array extent");
      t = ast_.array_of(t, static_cast<int64_t>(n.value));
    }
    return {t, name.text, loc};
  }

  void parse_toplevel() {
    if (at_kw("struct") && is_struct_definition()) {
      parse_struct_def();
      return;
    }
    SourceLoc loc = lex_.peek().loc;
    if (!at_type_start()) fail("expected declaration");
    TypeId base = parse_base_type();
    Declarator d = parse_declarator(base);
    if (at_punct("(")) {
      parse_function(base, d, loc);
      return;
    }
    // global variable declaration, possibly with comma declarators
    for (;;) {
      NodeId decl = finish_var_decl(d, /*is_global=*/true);
      ast_.toplevel.push_back(decl);
      ast_.globals.push_back(decl);
      if (at_punct(",")) {
        lex_.take();
        d = parse_declarator(base);
        continue;
      }
      expect_punct(";");
      break;
    }
  }

  // Distinguishes "struct S { ... };" from "struct S x;" declarations.
  bool is_struct_definition() {
    // lookahead: struct Ident '{'
    Lexer saved = lex_;
    lex_.take();  // struct
    if (lex_.peek().kind != Tok::Ident) fail("expected struct tag");
    lex_.take();
    bool def = at_punct("{");
    lex_ = saved;
    return def;
  }

  void parse_struct_def() {
    Token kw = lex_.take();  // struct
    Token name = expect_ident();
    if (ast_.find_struct(name.text) >= 0)
      throw ParseError(name.loc, "struct '" + name.text + "' redefined");
    expect_punct("{");
    StructDef def;
    def.name = name.text;
    while (!at_punct("}")) {
      TypeId base = parse_base_type();
      for (;;) {
        Declarator d = parse_declarator(base);
        if (ast_.type(d.type).kind == TypeKind::Array ||
            ast_.type(d.type).kind == TypeKind::Struct)
          throw ParseError(d.loc, "struct fields must be scalar");
        def.fields.push_back({d.name, d.type, 0});
        if (at_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
      expect_punct(";");
    }
    expect_punct("}");
    expect_punct(";");
    ast_.structs.push_back(def);
    int sid = static_cast<int>(ast_.structs.size() - 1);
    ast_.layout_struct(sid);
    Node n;
    n.kind = NodeKind::StructDecl;
    n.loc = kw.loc;
    n.aux = sid;
    ast_.toplevel.push_back(ast_.add(std::move(n)));
  }

  NodeId finish_var_decl(const Declarator& d, bool is_global) {
    Node n;
    n.kind = NodeKind::VarDecl;
    n.loc = d.loc;
    n.text = d.name;
    n.type = d.type;
    n.storage = is_global ? Storage::Global : Storage::Local;
    NodeId init = kNoNode;
    if (at_punct("=")) {
      lex_.take();
      init = at_punct("{") ? parse_init_list() : parse_assignment();
    }
    n.kids.push_back(init);
    return ast_.add(std::move(n));
  }

  NodeId parse_init_list() {
    Token open = expect_punct("{");
    Node n;
    n.kind = NodeKind::InitList;
    n.loc = open.loc;
    if (!at_punct("}")) {
      for (;;) {
        n.kids.push_back(at_punct("{") ? parse_init_list() : parse_assignment());
        if (at_punct(",")) {
          lex_.take();
          if (at_punct("}")) break;  // trailing comma
          continue;
        }
        break;
      }
    }
    expect_punct("}");
    return ast_.add(std::move(n));
  }

  void parse_function(TypeId base, const Declarator& d, SourceLoc loc) {
    if (ast_.type(d.type).kind == TypeKind::Array)
      throw ParseError(loc, "function returning array");
    Node fn;
    fn.kind = NodeKind::Function;
    fn.loc = loc;
    fn.text = d.name;
    fn.type = d.type;  // return type
    (void)base;
    expect_punct("(");
    std::vector<NodeId> params;
    if (!at_punct(")")) {
      if (at_kw("void") && peek_is_void_paramlist()) {
        lex_.take();
      } else {
        for (;;) {
          if (!at_type_start()) fail("expected parameter type");
          TypeId pbase = parse_base_type();
          Declarator pd = parse_declarator(pbase);
          Node p;
          p.kind = NodeKind::VarDecl;
          p.loc = pd.loc;
          p.text = pd.name;
          p.type = pd.type;
          p.storage = Storage::Param;
          p.kids.push_back(kNoNode);
          params.push_back(ast_.add(std::move(p)));
          if (at_punct(",")) {
            lex_.take();
            continue;
          }
          break;
        }
      }
    }
    expect_punct(")");
    NodeId body = kNoNode;
    if (at_punct("{")) {
      body = parse_block();
    } else {
      expect_punct(";");  // prototype
    }
    fn.kids.push_back(body);
    for (NodeId p : params) fn.kids.push_back(p);
    NodeId id = ast_.add(std::move(fn));
    ast_.toplevel.push_back(id);
    ast_.functions.push_back(id);
  }

  bool peek_is_void_paramlist() {
    Lexer saved = lex_;
    lex_.take();
    bool ok = at_punct(")");
    lex_ = saved;
    return ok;
  }

  NodeId parse_block() {
    Token open = expect_punct("{");
    Node b;
    b.kind = NodeKind::Block;
    b.loc = open.loc;
    NodeId id = ast_.add(std::move(b));
    std::vector<NodeId> kids;
    while (!at_punct("}")) {
      if (lex_.peek().kind == Tok::End) fail("unterminated block");
      if (at_kw("struct") && is_struct_definition())
        fail("struct definitions are global-only");
      if (at_type_start()) {
        // comma declarators split into one declaration statement each, so
        // the printed form stays one statement per line
        parse_local_decls(kids);
      } else {
        kids.push_back(parse_stmt());
      }
    }
    lex_.take();
    ast_.at(id).kids = std::move(kids);
    return id;
  }

  void parse_local_decls(std::vector<NodeId>& out) {
    SourceLoc loc = lex_.peek().loc;
    TypeId base = parse_base_type();
    bool first = true;
    for (;;) {
      Declarator d = parse_declarator(base);
      NodeId var = finish_var_decl(d, /*is_global=*/false);
      Node ds;
      ds.kind = NodeKind::DeclStmt;
      ds.loc = first ? loc : d.loc;
      ds.kids = {var};
      out.push_back(ast_.add(std::move(ds)));
      first = false;
      if (at_punct(",")) {
        lex_.take();
        continue;
      }
      break;
    }
    expect_punct(";");
  }

  // Bodies of if/while/for/else are normalized to blocks so every anchor
  // statement has a block parent and the printer stays one-statement-per-line.
  NodeId parse_body() {
    if (at_punct("{")) return parse_block();
    SourceLoc loc = lex_.peek().loc;
    NodeId s = parse_stmt();
    Node b;
    b.kind = NodeKind::Block;
    b.loc = loc;
    b.kids.push_back(s);
    return ast_.add(std::move(b));
  }

  NodeId parse_decl_stmt() {
    SourceLoc loc = lex_.peek().loc;
    TypeId base = parse_base_type();
    Node ds;
    ds.kind = NodeKind::DeclStmt;
    ds.loc = loc;
    NodeId id = ast_.add(std::move(ds));
    std::vector<NodeId> kids;
    for (;;) {
      Declarator d = parse_declarator(base);
      kids.push_back(finish_var_decl(d, /*is_global=*/false));
      if (at_punct(",")) {
        lex_.take();
        continue;
      }
      break;
    }
    expect_punct(";");
    ast_.at(id).kids = std::move(kids);
    return id;
  }

  NodeId parse_stmt() {
    SourceLoc loc = lex_.peek().loc;
    if (at_punct("{")) return parse_block();
    if (at_punct(";")) {
      lex_.take();
      Node n;
      n.kind = NodeKind::Empty;
      n.loc = loc;
      return ast_.add(std::move(n));
    }
    if (at_kw("struct") && is_struct_definition())
      fail("struct definitions are global-only");
    if (at_type_start())
      fail("declaration not allowed as an unbraced statement body");
    if (at_kw("if")) {
      lex_.take();
      expect_punct("(");
      NodeId cond = parse_expr();
      expect_punct(")");
      NodeId then = parse_body();
      NodeId els = kNoNode;
      if (at_kw("else")) {
        lex_.take();
        els = at_kw("if") ? parse_stmt() : parse_body();
      }
      Node n;
      n.kind = NodeKind::If;
      n.loc = loc;
      n.kids = {cond, then, els};
      return ast_.add(std::move(n));
    }
    if (at_kw("while")) {
      lex_.take();
      expect_punct("(");
      NodeId cond = parse_expr();
      expect_punct(")");
      NodeId body = parse_body();
      Node n;
      n.kind = NodeKind::While;
      n.loc = loc;
      n.kids = {cond, body};
      return ast_.add(std::move(n));
    }
    if (at_kw("for")) {
      lex_.take();
      expect_punct("(");
      NodeId init = kNoNode;
      if (at_punct(";")) {
        lex_.take();
      } else if (at_type_start()) {
        init = parse_decl_stmt();  // consumes ';'
      } else {
        NodeId e = parse_expr();
        Node es;
        es.kind = NodeKind::ExprStmt;
        es.loc = ast_.at(e).loc;
        es.kids = {e};
        init = ast_.add(std::move(es));
        expect_punct(";");
      }
      NodeId cond = kNoNode;
      if (!at_punct(";")) cond = parse_expr();
      expect_punct(";");
      NodeId inc = kNoNode;
      if (!at_punct(")")) inc = parse_expr();
      expect_punct(")");
      NodeId body = parse_body();
      Node n;
      n.kind = NodeKind::For;
      n.loc = loc;
      n.kids = {init, cond, inc, body};
      return ast_.add(std::move(n));
    }
    if (at_kw("return")) {
      lex_.take();
      NodeId e = kNoNode;
      if (!at_punct(";")) e = parse_expr();
      expect_punct(";");
      Node n;
      n.kind = NodeKind::Return;
      n.loc = loc;
      n.kids = {e};
      return ast_.add(std::move(n));
    }
    if (at_kw("break") || at_kw("continue")) {
      bool brk = at_kw("break");
      lex_.take();
      expect_punct(";");
      Node n;
      n.kind = brk ? NodeKind::Break : NodeKind::Continue;
      n.loc = loc;
      return ast_.add(std::move(n));
    }
    NodeId e = parse_expr();
    expect_punct(";");
    Node n;
    n.kind = NodeKind::ExprStmt;
    n.loc = loc;
    n.kids = {e};
    return ast_.add(std::move(n));
  }

  // ----- expressions -----

  NodeId parse_expr() { return parse_assignment(); }

  static Op assign_op(const std::string& p) {
    if (p == "=") return Op::Assign;
    if (p == "+=") return Op::AddAssign;
    if (p == "-=") return Op::SubAssign;
    if (p == "*=") return Op::MulAssign;
    if (p == "/=") return Op::DivAssign;
    if (p == "%=") return Op::RemAssign;
    if (p == "<<=") return Op::ShlAssign;
    if (p == ">>=") return Op::ShrAssign;
    if (p == "&=") return Op::AndAssign;
    if (p == "|=") return Op::OrAssign;
    if (p == "^=") return Op::XorAssign;
    return Op::None;
  }

  NodeId parse_assignment() {
    SourceLoc loc = lex_.peek().loc;
    NodeId lhs = parse_binary(0);
    if (lex_.peek().kind == Tok::Punct) {
      Op op = assign_op(lex_.peek().text);
      if (op != Op::None) {
        lex_.take();
        NodeId rhs = parse_assignment();
        Node n;
        n.kind = NodeKind::Assign;
        n.loc = loc;
        n.op = op;
        n.kids = {lhs, rhs};
        return ast_.add(std::move(n));
      }
      if (at_punct("?"))
        fail("conditional operator outside subset");
    }
    return lhs;
  }

  struct BinOpInfo {
    Op op;
    int prec;
  };
  static const BinOpInfo* binop_info(const std::string& p) {
    static const std::map<std::string, BinOpInfo> table = {
        {"||", {Op::LogOr, 1}},  {"&&", {Op::LogAnd, 2}},
        {"|", {Op::BitOr, 3}},   {"^", {Op::BitXor, 4}},
        {"&", {Op::BitAnd, 5}},  {"==", {Op::Eq, 6}},
        {"!=", {Op::Ne, 6}},     {"<", {Op::Lt, 7}},
        {">", {Op::Gt, 7}},      {"<=", {Op::Le, 7}},
        {">=", {Op::Ge, 7}},     {"<<", {Op::Shl, 8}},
        {">>", {Op::Shr, 8}},    {"+", {Op::Add, 9}},
        {"-", {Op::Sub, 9}},     {"*", {Op::Mul, 10}},
        {"/", {Op::Div, 10}},    {"%", {Op::Rem, 10}},
    };
    auto it = table.find(p);
    return it == table.end() ? nullptr : &it->second;
  }

  NodeId parse_binary(int min_prec) {
    SourceLoc loc = lex_.peek().loc;
    NodeId lhs = parse_unary();
    for (;;) {
      if (lex_.peek().kind != Tok::Punct) return lhs;
      const BinOpInfo* info = binop_info(lex_.peek().text);
      if (!info || info->prec < min_prec) return lhs;
      lex_.take();
      NodeId rhs = parse_binary(info->prec + 1);
      Node n;
      n.kind = NodeKind::Binary;
      n.loc = loc;
      n.op = info->op;
      n.kids = {lhs, rhs};
      lhs = ast_.add(std::move(n));
    }
  }

  bool peek_is_cast() {
    if (!at_punct("(")) return false;
    Lexer saved = lex_;
    lex_.take();
    bool is_type = at_type_start();
    lex_ = saved;
    return is_type;
  }

  NodeId parse_unary() {
    SourceLoc loc = lex_.peek().loc;
    if (lex_.peek().kind == Tok::Punct) {
      const std::string& p = lex_.peek().text;
      Op op = Op::None;
      if (p == "+") op = Op::Plus;
      else if (p == "-") op = Op::Neg;
      else if (p == "!") op = Op::LogNot;
      else if (p == "~") op = Op::BitNot;
      else if (p == "*") op = Op::Deref;
      else if (p == "&") op = Op::AddrOf;
      if (op != Op::None) {
        lex_.take();
        NodeId operand = parse_unary();
        Node n;
        n.kind = NodeKind::Unary;
        n.loc = loc;
        n.op = op;
        n.kids = {operand};
        return ast_.add(std::move(n));
      }
      if (p == "++" || p == "--") {
        Op inc = p == "++" ? Op::Inc : Op::Dec;
        lex_.take();
        NodeId operand = parse_unary();
        Node n;
        n.kind = NodeKind::IncDec;
        n.loc = loc;
        n.op = inc;
        n.aux = 1;  // prefix
        n.kids = {operand};
        return ast_.add(std::move(n));
      }
      if (peek_is_cast()) {
        lex_.take();  // (
        TypeId base = parse_base_type();
        TypeId t = base;
        while (at_punct("*")) {
          lex_.take();
          t = ast_.ptr_to(t);
        }
        expect_punct(")");
        NodeId operand = parse_unary();
        Node n;
        n.kind = NodeKind::Cast;
        n.loc = loc;
        n.type = t;
        n.kids = {operand};
        return ast_.add(std::move(n));
      }
    }
    return parse_postfix();
  }

  NodeId parse_postfix() {
    SourceLoc loc = lex_.peek().loc;
    NodeId e = parse_primary(loc);
    for (;;) {
      if (at_punct("[")) {
        lex_.take();
        NodeId idx = parse_expr();
        expect_punct("]");
        Node n;
        n.kind = NodeKind::Index;
        n.loc = loc;
        n.kids = {e, idx};
        e = ast_.add(std::move(n));
      } else if (at_punct(".") || at_punct("->")) {
        bool arrow = lex_.take().text == "->";
        Token field = expect_ident();
        Node n;
        n.kind = NodeKind::Member;
        n.loc = loc;
        n.text = field.text;
        n.aux = arrow ? 1 : 0;
        n.kids = {e};
        e = ast_.add(std::move(n));
      } else if (at_punct("++") || at_punct("--")) {
        Op op = lex_.take().text == "++" ? Op::Inc : Op::Dec;
        Node n;
        n.kind = NodeKind::IncDec;
        n.loc = loc;
        n.op = op;
        n.aux = 0;  // postfix
        n.kids = {e};
        e = ast_.add(std::move(n));
      } else {
        return e;
      }
    }
  }

  NodeId parse_primary(SourceLoc loc) {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Number) {
      Token tok = lex_.take();
      Node n;
      n.kind = NodeKind::IntLit;
      n.loc = loc;
      n.ival = tok.value;
      n.type = literal_type(tok);
      return ast_.add(std::move(n));
    }
    if (t.kind == Tok::CharLit) {
      Token tok = lex_.take();
      Node n;
      n.kind = NodeKind::CharLit;
      n.loc = loc;
      n.ival = tok.value;
      n.type = ast_.int_type(32, true);  // character constants are int
      return ast_.add(std::move(n));
    }
    if (t.kind == Tok::StrLit) {
      Token tok = lex_.take();
      ast_.strings.push_back(tok.text);
      Node n;
      n.kind = NodeKind::StrLit;
      n.loc = loc;
      n.aux = static_cast<int>(ast_.strings.size() - 1);
      return ast_.add(std::move(n));
    }
    if (t.kind == Tok::Ident) {
      Token name = lex_.take();
      if (at_punct("(")) {
        lex_.take();
        std::vector<NodeId> args;
        if (!at_punct(")")) {
          for (;;) {
            args.push_back(parse_assignment());
            if (at_punct(",")) {
              lex_.take();
              continue;
            }
            break;
          }
        }
        expect_punct(")");
        Node n;
        n.kind = NodeKind::Call;
        n.loc = loc;
        n.text = name.text;
        auto bi = kBuiltins.find(name.text);
        n.aux = static_cast<int>(bi == kBuiltins.end() ? Builtin::None
                                                       : bi->second.id);
        if (bi != kBuiltins.end() && bi->second.argc >= 0 &&
            static_cast<int>(args.size()) != bi->second.argc)
          throw ParseError(loc, "wrong arity for " + name.text);
        n.kids = std::move(args);
        return ast_.add(std::move(n));
      }
      Node n;
      n.kind = NodeKind::Ident;
      n.loc = loc;
      n.text = name.text;
      return ast_.add(std::move(n));
    }
    if (at_punct("(")) {
      Token open = lex_.take();
      NodeId e = parse_expr();
      expect_punct(")");
      // Parentheses fold away; the construct's first token is the paren.
      ast_.at(e).loc = open.loc;
      return e;
    }
    fail("expected expression");
  }

  TypeId literal_type(const Token& t) {
    uint64_t v = t.value;
    bool u = t.suf_unsigned;
    int l = t.suf_long;
    if (u && l > 0) return ast_.int_type(64, false);
    if (u) return v <= 0xFFFFFFFFull ? ast_.int_type(32, false)
                                     : ast_.int_type(64, false);
    if (l > 0) return v <= 0x7FFFFFFFFFFFFFFFull ? ast_.int_type(64, true)
                                                 : ast_.int_type(64, false);
    if (v <= 0x7FFFFFFFull) return ast_.int_type(32, true);
    if (t.is_hex && v <= 0xFFFFFFFFull) return ast_.int_type(32, false);
    if (v <= 0x7FFFFFFFFFFFFFFFull) return ast_.int_type(64, true);
    return ast_.int_type(64, false);
  }
};

}  // namespace

Ast parse_program(const std::string& source) {
  Parser p(source);
  return p.run();
}

SourceLoc locate(const Ast& ast, NodeId id) {
  return ast.at(id).loc;  // Ast::at throws UnknownNode
}

}  // namespace ubf
