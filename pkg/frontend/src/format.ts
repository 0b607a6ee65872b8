/** Display formatting for values the API already computed. */

import { t, language } from "./labels.js";

const MONTHS_EN = [
  "January", "February", "March", "April", "May", "June",
  "July", "August", "September", "October", "November", "December",
];
const MONTHS_PT = [
  "janeiro", "fevereiro", "março", "abril", "maio", "junho",
  "julho", "agosto", "setembro", "outubro", "novembro", "dezembro",
];

/** "2025-01" -> "January 2025"; anything unparsable passes through. */
export function monthLabel(yearMonth: string): string {
  const match = /^(\d{4})-(\d{2})$/.exec(yearMonth);
  if (!match) return yearMonth;
  const month = parseInt(match[2], 10);
  if (month < 1 || month > 12) return yearMonth;
  const names = language() === "en" ? MONTHS_EN : MONTHS_PT;
  return `${names[month - 1]} ${match[1]}`;
}

export function outcomeLabel(outcome: string): string {
  const known = ["approved", "rejected", "tied"];
  return known.includes(outcome) ? t(`outcome_${outcome}`) : outcome;
}

export function positionLabel(position: string): string {
  const known = ["favor", "against", "abstention"];
  return known.includes(position) ? t(position) : position;
}

export function dimensionLabel(dimension: string): string {
  return t(`dim_${dimension}`);
}
