use serde::{Deserialize, Serialize};

use super::{bm25_search, Index, RetrievalConfig, SearchHit};

pub const DEFAULT_PERSONA: &str = "You are a financial expert specializing in the nuanced analysis of financial \
statements and a wide array of data-driven financial tasks. For each prompt you are given, think step by step. \
Sometimes, you must extract relevant information to proceed with the problem.";

pub const DEFAULT_INSTRUCTIONS: [&str; 2] = [
    "If any options are specified, ensure that your answer is one of the options specified.",
    "Do not explain why you think the answer is correct.",
];

/// Meta-instruction asking for an answer in the tool-call program format.
pub const TOOL_INSTRUCTION: &str = "Answer the question by formulating your response using predefined \
mathematical functions. For addition, use Add(a, b), which represents a + b. Use Subtract(a, b) to denote a - b \
for subtraction. Construct your answer by combining these functions appropriately to reflect the required \
calculations.";

pub const EXTRACTION_INSTRUCTION: &str =
    "From the following PDF file, extract all the relevant information that might help in answering the question:";

/// Content of a sectioned prompt. Optional sections that are `None` and an
/// empty instruction list are left out of the rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PromptSpec {
    pub persona: String,
    pub instructions: Vec<String>,
    pub context: Option<String>,
    pub retrieval: Option<String>,
    pub question: String,
}

impl Default for PromptSpec {
    fn default() -> Self {
        PromptSpec {
            persona: DEFAULT_PERSONA.to_string(),
            instructions: DEFAULT_INSTRUCTIONS.iter().map(|s| s.to_string()).collect(),
            context: None,
            retrieval: None,
            question: String::new(),
        }
    }
}

impl PromptSpec {
    /// Default persona and instructions with the given question.
    pub fn new(question: impl Into<String>) -> Self {
        PromptSpec { question: question.into(), ..Default::default() }
    }
}

/// Renders persona, then the `Instructions:`, `Context:`, `Retrieval:` and
/// `Question:` sections, each header on its own line followed by its content,
/// sections separated by a blank line, and a closing `Answer:` line.
pub fn build_prompt(spec: &PromptSpec) -> String {
    let mut sections: Vec<String> = Vec::new();
    if !spec.persona.is_empty() {
        sections.push(spec.persona.clone());
    }
    if !spec.instructions.is_empty() {
        sections.push(format!("Instructions:\n{}", spec.instructions.join("\n")));
    }
    if let Some(c) = &spec.context {
        sections.push(format!("Context:\n{c}"));
    }
    if let Some(r) = &spec.retrieval {
        sections.push(format!("Retrieval:\n{r}"));
    }
    sections.push(format!("Question:\n{}", spec.question));
    sections.push("Answer:".to_string());
    sections.join("\n\n")
}

/// First-stage prompt asking for the passages of `document_text` relevant to
/// `question`; the reply is expected after the closing `Extracted Text:`.
pub fn stage1_prompt(document_text: &str, question: &str) -> String {
    format!("{EXTRACTION_INSTRUCTION}\n\nPDF:\n{document_text}\n\nQuestion:\n{question}\n\nExtracted Text:")
}

/// Second stage of the chain: holds the question and retrieved passages and
/// renders the answer prompt once the first-stage extract is known.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage2Builder {
    pub question: String,
    /// Retrieved passages in rank order.
    pub retrieved: Vec<String>,
    pub hits: Vec<SearchHit>,
    pub persona: String,
    pub instructions: Vec<String>,
    pub context: Option<String>,
}

impl Stage2Builder {
    pub fn new(question: impl Into<String>, retrieved: Vec<String>) -> Self {
        let mut instructions: Vec<String> = DEFAULT_INSTRUCTIONS.iter().map(|s| s.to_string()).collect();
        instructions.push(TOOL_INSTRUCTION.to_string());
        Stage2Builder {
            question: question.into(),
            retrieved,
            hits: Vec::new(),
            persona: DEFAULT_PERSONA.to_string(),
            instructions,
            context: None,
        }
    }

    pub fn spec(&self, extracted_text: &str) -> PromptSpec {
        let mut parts = Vec::with_capacity(self.retrieved.len() + 1);
        if !extracted_text.trim().is_empty() {
            parts.push(extracted_text.trim().to_string());
        }
        parts.extend(self.retrieved.iter().cloned());
        PromptSpec {
            persona: self.persona.clone(),
            instructions: self.instructions.clone(),
            context: self.context.clone(),
            retrieval: if parts.is_empty() { None } else { Some(parts.join("\n\n")) },
            question: self.question.clone(),
        }
    }

    /// The full answer prompt: extract first, then retrieved passages, all
    /// under `Retrieval:`.
    pub fn build(&self, extracted_text: &str) -> String {
        build_prompt(&self.spec(extracted_text))
    }
}

/// Builds the first-stage prompt and a second-stage builder whose retrieved
/// passages are the BM25 hits for `question`.
pub fn build_retrieval_chain(
    document_text: &str,
    question: &str,
    index: &Index,
    config: &RetrievalConfig,
) -> (String, Stage2Builder) {
    let hits = bm25_search(index, question, config);
    let retrieved = hits
        .iter()
        .filter_map(|h| index.get(&h.id).map(|d| d.text.clone()))
        .collect();
    let mut stage2 = Stage2Builder::new(question, retrieved);
    stage2.hits = hits;
    (stage1_prompt(document_text, question), stage2)
}
