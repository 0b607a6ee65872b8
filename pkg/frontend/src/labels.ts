/**
 * UI labels, English first with a Portuguese toggle.
 *
 * Only chrome is translated; the minute data itself is shown in
 * whatever language the municipality publishes.
 */

export type Language = "en" | "pt";

let current: Language = "en";

const STRINGS: Record<string, [en: string, pt: string]> = {
  app_title: ["Municipal minutes", "Atas municipais"],
  nav_home: ["Home", "Início"],
  nav_back_office: ["Back office", "Gestão"],
  municipalities: ["Municipalities", "Municípios"],
  published_minutes: ["published minutes", "atas publicadas"],
  search_heading: ["Search the minutes", "Pesquisar as atas"],
  search_placeholder: ["e.g. health, budget...", "ex.: saúde, orçamento..."],
  search_button: ["Search", "Pesquisar"],
  scope_all: ["Everything", "Tudo"],
  scope_minutes: ["Minutes", "Atas"],
  scope_subjects: ["Subjects", "Assuntos"],
  results: ["results", "resultados"],
  no_results: [
    "No results. Try fewer or different words.",
    "Sem resultados. Tente menos palavras ou palavras diferentes.",
  ],
  search_prompt: ["Type a query to search.", "Escreva uma pesquisa."],
  recent_minutes: ["Recent minutes", "Atas recentes"],
  executive_members: ["Executive members", "Membros do executivo"],
  topics: ["Topics", "Tópicos"],
  browse_minutes: ["Browse minutes", "Consultar atas"],
  timeline: ["Timeline", "Cronologia"],
  subjects: ["subjects", "assuntos"],
  filters: ["Filters", "Filtros"],
  clear_filters: ["Clear filters", "Limpar filtros"],
  dim_topic: ["Topic", "Tópico"],
  dim_party: ["Party", "Partido"],
  dim_participant: ["Participant", "Participante"],
  dim_meeting_type: ["Meeting type", "Tipo de reunião"],
  dim_municipality: ["Municipality", "Município"],
  meeting_date: ["Meeting date", "Data da reunião"],
  location: ["Location", "Local"],
  meeting_type: ["Meeting type", "Tipo de reunião"],
  participants: ["Participants", "Participantes"],
  voting_summary: ["Voting summary", "Resumo das votações"],
  favor: ["In favor", "A favor"],
  against: ["Against", "Contra"],
  abstention: ["Abstentions", "Abstenções"],
  outcome_approved: ["Approved", "Aprovado"],
  outcome_rejected: ["Rejected", "Rejeitado"],
  outcome_tied: ["Tied", "Empatado"],
  no_vote: ["No vote recorded", "Sem votação registada"],
  raw_text: ["Raw text", "Texto original"],
  newsletter: ["Newsletter", "Boletim"],
  newsletter_hint: [
    "Get an email when new minutes are published.",
    "Receba um email quando forem publicadas novas atas.",
  ],
  email_placeholder: ["you@example.org", "voce@exemplo.org"],
  subscribe: ["Subscribe", "Subscrever"],
  subscribed: ["Subscribed.", "Subscrito."],
  already_subscribed: ["Already subscribed.", "Já subscrito."],
  admin_token_prompt: [
    "Enter the administrator token to continue.",
    "Introduza o token de administração para continuar.",
  ],
  admin_token: ["Admin token", "Token de administração"],
  sign_in: ["Sign in", "Entrar"],
  minutes: ["Minutes", "Atas"],
  upload: ["Upload", "Carregar"],
  upload_heading: ["Upload a minute", "Carregar uma ata"],
  review: ["Review", "Rever"],
  save_draft: ["Save draft", "Guardar rascunho"],
  validate: ["Validate", "Validar"],
  publish: ["Publish", "Publicar"],
  status: ["Status", "Estado"],
  extraction_draft: ["Extraction draft", "Rascunho de extração"],
  unresolved_participants: ["Unresolved participants", "Participantes por identificar"],
  ack_unresolved: [
    "Acknowledge and register the unresolved participants",
    "Confirmar e registar os participantes por identificar",
  ],
  add_vote: ["Add vote", "Adicionar voto"],
  remove: ["Remove", "Remover"],
  not_found: ["Page not found.", "Página não encontrada."],
  empty_store: ["Nothing published yet.", "Ainda não há publicações."],
  unreachable: [
    "The service is unreachable.",
    "O serviço está indisponível.",
  ],
  retry: ["Retry", "Tentar novamente"],
  gate_prompt: [
    "This site requires an access password.",
    "Este site requer uma palavra-passe de acesso.",
  ],
  password: ["Password", "Palavra-passe"],
  enter: ["Enter", "Entrar"],
  language_toggle: ["PT", "EN"],
};

export function t(key: string): string {
  const entry = STRINGS[key];
  if (!entry) return key;
  return current === "en" ? entry[0] : entry[1];
}

export function language(): Language {
  return current;
}

export function setLanguage(lang: Language): void {
  current = lang;
}

export function toggleLanguage(): Language {
  current = current === "en" ? "pt" : "en";
  return current;
}
