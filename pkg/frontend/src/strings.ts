// Static UI string table. Node labels come from the graph files and are
// deliberately not translated here.

export type Language = "en" | "de";

const TABLE = {
  en: {
    title: "Rescue operator console",
    situation: "Recognized situation",
    severity: "Severity (proxy values)",
    maxProbability: "max probability",
    entropy: "entropy",
    treatmentPlan: "Treatment plan",
    recommendedActions: "Recommended actions",
    confirm: "Confirm",
    confirmed: "done",
    pendingQuestions: "Open questions",
    answerYes: "Yes",
    answerNo: "No",
    alternates: "Other probable paths",
    switchTo: "Switch path",
    dismiss: "Dismiss",
    switchSuggested: "Path switch suggested:",
    overridePicker: "Manual override",
    override: "Override",
    connection: { connecting: "connecting", live: "live", reconnecting: "reconnecting", closed: "session closed" },
    sessionCompleted: "Treatment track completed.",
    noSession: "No session yet.",
  },
  de: {
    title: "Rettungs-Bedienkonsole",
    situation: "Erkannte Situation",
    severity: "Schweregrad (Proxy-Werte)",
    maxProbability: "max. Wahrscheinlichkeit",
    entropy: "Entropie",
    treatmentPlan: "Behandlungsplan",
    recommendedActions: "Empfohlene Maßnahmen",
    confirm: "Bestätigen",
    confirmed: "erledigt",
    pendingQuestions: "Offene Fragen",
    answerYes: "Ja",
    answerNo: "Nein",
    alternates: "Weitere wahrscheinliche Pfade",
    switchTo: "Pfad wechseln",
    dismiss: "Ausblenden",
    switchSuggested: "Pfadwechsel vorgeschlagen:",
    overridePicker: "Manuelle Übersteuerung",
    override: "Übersteuern",
    connection: { connecting: "verbinde", live: "live", reconnecting: "verbinde neu", closed: "Einsatz beendet" },
    sessionCompleted: "Behandlungspfad abgeschlossen.",
    noSession: "Noch kein Einsatz.",
  },
} as const;

export function strings(language: Language) {
  return TABLE[language];
}
