#include "steady/prompts.hpp"

#include <algorithm>

namespace steady::prompts {

namespace {

using sections::ConstraintKind;
using sections::ConstraintSpec;

// ---------------------------------------------------------------------------
// English

constexpr std::string_view kEnSimpleStory = R"T(Please write a novel consisting of {num_section} chapters. Each chapter should revolve around a theme or plot, with a minimum of {word_section} words for each chapter. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} chapters are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

#*# Title:)T";

constexpr std::string_view kEnSimpleDialogue = R"T(Please generate {num_section} rounds of dialogue between customers and customer service. Each round should include a customer's question and a customer service representative's response, with a minimum of {word_section} words for each round. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} rounds of dialogue are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

#*# Round 1:
customers:)T";

constexpr std::string_view kEnSimpleDiary = R"T(Please write a diary for {num_section} days for Jeff. Each entry should include the date and a brief description of the content, with a minimum of {word_section} words for each entry. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} diaries are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

#*# Date: Day 1:)T";

constexpr std::string_view kEnSimpleArchitecture = R"T(Please design a {num_section}-story building. Describe the function or layout of each floor, with at least {word_section} words for each layer. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} floors are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

#*# Floor 1:)T";

constexpr std::string_view kEnComplexStory = R"T(Please write a fantasy novel with {num_section} chapters about Jeff. The novel should have a clear theme and structure, with characters experiencing multiple twists and personal growth throughout the plot. Each chapter should describe the main characters' actions, thoughts, and emotional development, while also incorporating relevant background information (such as historical context, social environment, etc.). Each chapter should be around {word_section} words, with enough detail and emotional depth to keep the reader engaged. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} chapters are completed and '*** finished ***' is used to indicate the end of the document. Do not output other characters to stop.

*** started ***

#*# Chapter1:)T";

constexpr std::string_view kEnComplexDiary = R"T(Please write a diary for {num_section} days. Your name is Jeff, a white-collar worker. Each entry can include aspects such as your mood for the day, key events, challenges faced, solutions, and hopes or reflections for the future. Ensure that each diary entry expresses different emotions and reflects various life events and growth experiences. The diary content can cover a range of life scenarios, such as work, family, friends, health, and travel. Each entry should be around {word_section} words. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} chapters are completed and '*** finished ***' is used to indicate the end of the document. Do not output other characters to stop.

*** started ***

#*# Date: Day 1)T";

constexpr std::string_view kEnComplexDialogue = R"T(Please generate {num_section} rounds of dialogue between customers and customer service. Each round of dialogue should include the customer's question and the customer service representative's response, along with service recommendations or solutions. These dialogues can cover multiple industries and scenarios, with each turn of conversation being non-contiguous and the scenes able to switch, such as in electronic product support, travel booking, financial services, and customer complaint handling. Each round should reflect different emotional changes, with the customer possibly exhibiting emotions like anxiety, confusion, anger, or happiness, while the customer service responses should appropriately provide reassurance, explanations, or solutions based on the customer's emotional state. Each round of dialogue should contain at least {word_section} words. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} rounds of dialogue are completed and '*** finished ***' is used to indicate the end of the document. Do not output other characters to stop.

*** started ***

#*# Round 1
Customer:)T";

constexpr std::string_view kEnComplexArchitecture = R"T(Please design a {num_section}-story mixed-use skyscraper for work and living. Describe the function or layout of each floor. Each floor should have a different function and design, closely connected to other floors. Include detailed descriptions of office areas, commercial spaces, residential areas, and entertainment and leisure zones. The content should have sufficient detail and depth, such as design concepts, layouts, and unique elements (like floor decoration styles, space utilization, and the application of smart technology) to present a multifunctional building. Each floor's description should be at least {word_section} words. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} floors are completed and '*** finished ***' is used to indicate the end of the document. Do not output other characters to stop.

*** started ***

#*# Floor 1:)T";

constexpr std::string_view kEnSimpleCode = R"T(Please generate a complete library of {num_section} different functions. Each function should include the function name, parameters, return type, and function comments, formatted in Python. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} functions are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

# Function 1: Calculate the area of a circle, given the radius
def calculate_area(radius):
    """
    This function calculates the area of a circle given its radius.
    Parameters:
        radius (float): The radius of the circle.
    Returns:
        float: The area of the circle.
    """
    return 3.14159 * radius ** 2)T";

constexpr std::string_view kEnSimpleUser = R"T(Please generate {num_section} virtual user profiles, with each user's information including name, age, gender, address, email, and phone number, formatted as JSON. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} profiles are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

[{
  "index": 1,
  "name": "John Doe",
  "age": 30,
  "gender": "Male",
  "address": "1234 Elm Street, Springfield, IL, 62701",
  "email": "johndoe@example.com",
  "phone": "+1-555-123-4567"
}])T";

constexpr std::string_view kEnSimpleCompany = R"T(Please generate {num_section} virtual company profiles. Each profile should include the company name, industry, year of establishment, company address, and contact number, formatted in JSON. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} virtual company profiles are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

[{
  "index": 1,
  "company_name": "Tech Innovations Inc.",
  "industry": "Technology",
  "year_established": 2015,
  "company_address": "4567 Silicon Valley, San Jose, CA, 95110",
  "contact_number": "+1-800-234-5678"
}])T";

constexpr std::string_view kEnSimpleFormula = R"T(Please generate {num_section} mathematical formulas, formatted in LaTeX. Each formula should be preceded by a brief comment explaining the formula. The formula should be enclosed in \begin{equation} and \end{equation}. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} mathematical formulas are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

% Formula 1: Energy-mass equivalence: E=mc^2, where energy is equal to mass multiplied by the square of the speed of light
\begin{equation}
E = mc^2
\end{equation})T";

constexpr std::string_view kEnComplexCode = R"T(Please generate a library of {num_section} Python functions with varying levels of difficulty. The functions should range from simple mathematical operations to more complex data processing, string manipulations, machine learning model training, and evaluation functions. Each function should include the function name, parameters, return type, implementation, and detailed comments. The comments should describe the function's purpose, usage, and include input/output examples and edge cases. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} Python functions are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

# Function 1: Add two numbers
def add(a, b):
    """
    This function adds two numbers together.
    Parameters:
        a (int/float): The first number.
        b (int/float): The second number.
    Returns:
        int/float: The sum of the two numbers.
    Example input:
        add(3, 4)
    Example output:
        7
    """
    return a + b)T";

constexpr std::string_view kEnComplexUser = R"T(Please generate {num_section} virtual user profiles in Json format. Each profile should include the user’s name, age, gender, address, email, phone number, occupation, hobbies, education, marital status, number of children, work experience, and personal philosophy. Each field should reflect reasonable diversity, and some fields like “personal philosophy” and “work experience” should include short background stories or brief descriptions. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} virtual user profiles are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

[{
  "index": 1,
  "name": "Emily Davis",
  "age": 30,
  "gender": "Female",
  "address": "789 Elm Street, San Francisco, CA, USA",
  "email": "emily.davis@example.com",
  "phone": "+1-415-555-0123",
  "occupation": "Marketing Manager",
  "hobbies": ["Yoga", "Hiking", "Cooking"],
  "education": "Bachelor's",
  "marital_status": "Married",
  "children": 2,
  "work_experience": "7 years of experience in digital marketing and brand management.",
  "personal_philosophy": "I believe in creating meaningful connections and making a positive impact."
}])T";

constexpr std::string_view kEnComplexCompany = R"T(Please generate {num_section} virtual company profiles in Json format. Each profile should include the company name, industry, year of establishment, company address, contact number, number of employees, main products or services, company bio, business model, annual revenue, market positioning, competitive advantage, and recent developments. Ensure that each company has a unique business model and a detailed description of its background, philosophy, and innovation. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} virtual company profiles are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

[{
  "index": 1,
  "company_name": "Innovative Tech Solutions, Inc.",
  "industry": "Information Technology",
  "year_established": 2015,
  "company_address": "123 Tech Park, San Francisco, CA, USA",
  "contact_number": "+1-415-555-6789",
  "number_of_employees": 120,
  "products_or_services": ["Artificial Intelligence Software", "Cloud Computing Services"],
  "company_bio": "Innovative Tech Solutions is dedicated to enhancing the quality of life through technological innovations, offering products that include AI and cloud computing solutions.",
  "business_model": "A combination of B2B and B2C, primarily providing customized solutions for enterprise clients, as well as consumer-targeted products.",
  "annual_revenue": "$7 million",
  "market_position": "Leading position in the domestic market, currently expanding into international markets.",
  "competitive_advantage": "A strong technical team and advanced R&D capabilities give the company a competitive edge in the AI sector."
}])T";

constexpr std::string_view kEnComplexFormula = R"T(Please generate {num_section} mathematical formulas in LaTeX format, with the difficulty increasing from simple to complex. Each formula should be preceded by a brief comment explaining its meaning or application. Start with basic algebraic formulas, then move to more complex formulas from calculus, linear algebra, probability theory, and other fields. Each formula should be enclosed in \begin{equation} and \end{equation}. Ensure clarity and continuity without any interruptions or omissions in the narrative throughout the document. Do not stop generating content until all {num_section} mathematical formulas are completed and '*** finished ***' is used to indicate the end of the document.

*** started ***

% Formula 1: Energy-mass equivalence: E=mc^2, where energy is equal to mass multiplied by the square of the speed of light.
% This formula is widely used in physics to describe the equivalence of energy and mass, especially in nuclear reactions and particle physics.
\begin{equation}
E = mc^2
\end{equation})T";

// ---------------------------------------------------------------------------
// Chinese (unofficial translations; header blocks kept identical to English)

constexpr std::string_view kChSimpleStory = R"T(请写一部由{num_section}章组成的小说。每一章都应围绕一个主题或情节展开，每章不少于{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}章完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

#*# Title:)T";

constexpr std::string_view kChSimpleDialogue = R"T(请生成{num_section}轮顾客与客服之间的对话。每一轮应包括顾客的问题和客服代表的回答，每轮不少于{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}轮对话完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

#*# Round 1:
customers:)T";

constexpr std::string_view kChSimpleDiary = R"T(请为Jeff写{num_section}天的日记。每篇日记应包括日期和内容的简要描述，每篇不少于{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}篇日记完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

#*# Date: Day 1:)T";

constexpr std::string_view kChSimpleArchitecture = R"T(请设计一栋{num_section}层的建筑。描述每一层的功能或布局，每层不少于{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}层完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

#*# Floor 1:)T";

constexpr std::string_view kChComplexStory = R"T(请写一部关于Jeff的{num_section}章奇幻小说。小说应有清晰的主题和结构，人物在情节中经历多次转折与个人成长。每一章应描写主要人物的行动、想法和情感变化，并融入相关的背景信息（如历史背景、社会环境等）。每章约{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}章完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。不要输出其他字符来停止。

*** started ***

#*# Chapter1:)T";

constexpr std::string_view kChComplexDiary = R"T(请写{num_section}天的日记。你叫Jeff，是一名白领。每篇日记可以包括当天的心情、关键事件、遇到的挑战、解决办法以及对未来的希望或反思。每篇约{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}篇完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。不要输出其他字符来停止。

*** started ***

#*# Date: Day 1)T";

constexpr std::string_view kChComplexDialogue = R"T(请生成{num_section}轮顾客与客服之间的对话。每轮对话应包括顾客的问题、客服代表的回答以及服务建议或解决方案。对话可以涵盖多个行业和场景，每轮应体现不同的情绪变化。每轮对话至少{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}轮对话完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。不要输出其他字符来停止。

*** started ***

#*# Round 1
Customer:)T";

constexpr std::string_view kChComplexArchitecture = R"T(请设计一栋{num_section}层的办公与居住混合用途摩天大楼。描述每一层的功能或布局，每层的功能和设计应各不相同，并与其他楼层紧密关联。每层的描述至少{word_section}字。确保全文清晰连贯，叙述中没有任何中断或遗漏。在全部{num_section}层完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。不要输出其他字符来停止。

*** started ***

#*# Floor 1:)T";

constexpr std::string_view kChSimpleCode = R"T(请生成一个包含{num_section}个不同函数的完整函数库。每个函数应包括函数名、参数、返回类型和函数注释，使用Python格式。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个函数完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

# Function 1: Calculate the area of a circle, given the radius
def calculate_area(radius):
    """
    This function calculates the area of a circle given its radius.
    Parameters:
        radius (float): The radius of the circle.
    Returns:
        float: The area of the circle.
    """
    return 3.14159 * radius ** 2)T";

constexpr std::string_view kChComplexCode = R"T(请生成一个包含{num_section}个难度各异的Python函数库，从简单的数学运算到数据处理、字符串操作、机器学习模型训练与评估。每个函数应包括函数名、参数、返回类型、实现和详细注释，注释应说明用途、用法，并给出输入输出示例和边界情况。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个函数完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

# Function 1: Add two numbers
def add(a, b):
    """
    This function adds two numbers together.
    Parameters:
        a (int/float): The first number.
        b (int/float): The second number.
    Returns:
        int/float: The sum of the two numbers.
    Example input:
        add(3, 4)
    Example output:
        7
    """
    return a + b)T";

constexpr std::string_view kChSimpleUser = R"T(请生成{num_section}个虚拟用户资料，每个用户的信息包括姓名、年龄、性别、地址、电子邮件和电话号码，使用JSON格式。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个资料完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

[{
  "index": 1,
  "name": "John Doe",
  "age": 30,
  "gender": "Male",
  "address": "1234 Elm Street, Springfield, IL, 62701",
  "email": "johndoe@example.com",
  "phone": "+1-555-123-4567"
}])T";

constexpr std::string_view kChComplexUser = R"T(请以Json格式生成{num_section}个虚拟用户资料。每个资料应包括姓名、年龄、性别、地址、电子邮件、电话号码、职业、爱好、学历、婚姻状况、子女数量、工作经历和人生理念，其中工作经历和人生理念应包含简短的背景故事。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个资料完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

[{
  "index": 1,
  "name": "Emily Davis",
  "age": 30,
  "gender": "Female",
  "address": "789 Elm Street, San Francisco, CA, USA",
  "email": "emily.davis@example.com",
  "phone": "+1-415-555-0123",
  "occupation": "Marketing Manager",
  "hobbies": ["Yoga", "Hiking", "Cooking"],
  "education": "Bachelor's",
  "marital_status": "Married",
  "children": 2,
  "work_experience": "7 years of experience in digital marketing and brand management.",
  "personal_philosophy": "I believe in creating meaningful connections and making a positive impact."
}])T";

constexpr std::string_view kChSimpleCompany = R"T(请生成{num_section}个虚拟公司资料。每个资料应包括公司名称、行业、成立年份、公司地址和联系电话，使用JSON格式。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个资料完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

[{
  "index": 1,
  "company_name": "Tech Innovations Inc.",
  "industry": "Technology",
  "year_established": 2015,
  "company_address": "4567 Silicon Valley, San Jose, CA, 95110",
  "contact_number": "+1-800-234-5678"
}])T";

constexpr std::string_view kChComplexCompany = R"T(请以Json格式生成{num_section}个虚拟公司资料。每个资料应包括公司名称、行业、成立年份、公司地址、联系电话、员工人数、主要产品或服务、公司简介、商业模式、年收入、市场定位、竞争优势和近期发展。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个资料完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

[{
  "index": 1,
  "company_name": "Tech Innovations Inc.",
  "industry": "Technology",
  "year_established": 2015,
  "company_address": "4567 Silicon Valley, San Jose, CA, 95110",
  "contact_number": "+1-800-234-5678"
}])T";

constexpr std::string_view kChSimpleFormula = R"T(请生成{num_section}个数学公式，使用LaTeX格式。每个公式前应有一条简短的注释说明该公式，公式应放在\begin{equation}和\end{equation}之间。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个公式完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

% Formula 1: Energy-mass equivalence: E=mc^2, where energy is equal to mass multiplied by the square of the speed of light
\begin{equation}
E = mc^2
\end{equation})T";

constexpr std::string_view kChComplexFormula = R"T(请以LaTeX格式生成{num_section}个数学公式，难度由浅入深，从基础代数公式逐步过渡到微积分、线性代数、概率论等领域的公式。每个公式前应有一条简短的注释说明其含义或应用，公式应放在\begin{equation}和\end{equation}之间。确保全文清晰连贯，没有任何中断或遗漏。在全部{num_section}个公式完成之前不要停止生成内容，并在文末使用'*** finished ***'表示文档结束。

*** started ***

% Formula 1: Energy-mass equivalence: E=mc^2, where energy is equal to mass multiplied by the square of the speed of light.
\begin{equation}
E = mc^2
\end{equation})T";

constexpr std::string_view kJudge = R"T(You are an expert in evaluating text quality. Please evaluate the quality of an AI assistant’s response to a user’s writing request. Be as strict as possible.

You need to evaluate across the following six dimensions, with scores ranging from 1 to 5. The scoring criteria from 5 to 1 for each dimension are as follows:

1. Relevance: From content highly relevant and fully applicable to the user’s request to completely irrelevant or inapplicable.
2. Accuracy: From content completely accurate with no factual errors or misleading information to content with numerous errors and highly misleading.
3. Coherence: From clear structure with smooth logical connections to disorganized structure with no coherence.
4. Clarity: From clear language, rich in detail, and easy to understand to confusing expression with minimal details.
5. Breadth and Depth: From both broad and deep content with a lot of information to seriously lacking breadth and depth with minimal information.
6. Reading Experience: From excellent reading experience, engaging and easy to understand content to very poor reading experience, boring and hard to understand content.

Please evaluate the quality of the following response to a user’s request according to the above requirements.

<User Request>
{user_request}
</User Request>
<Response>
{model_response}
</Response>

Please evaluate the quality of the response. You must first provide a brief analysis of its quality, then give a comprehensive analysis with scores for each dimension. The output must strictly follow the JSON format: {"Analysis": ..., "Relevance": ..., "Accuracy": ..., "Coherence": ..., "Clarity": ..., "Breadth and Depth": ..., "Reading Experience": ...}. You do not need to consider whether the response meets the user’s length requirements in your evaluation. Ensure that only one integer between 1 and 5 is output for each dimension score.)T";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size()))
    s.replace(at, from.size(), to);
}

}  // namespace

std::string_view to_string(Task task) noexcept {
  switch (task) {
    case Task::story: return "story";
    case Task::dialogue: return "dialogue";
    case Task::diary: return "diary";
    case Task::architecture: return "architecture";
    case Task::code_function: return "code_function";
    case Task::user_info: return "user_info";
    case Task::company_info: return "company_info";
    case Task::math_formula: return "math_formula";
  }
  return "story";
}

std::string_view to_string(Complexity complexity) noexcept {
  switch (complexity) {
    case Complexity::simple: return "simple";
    case Complexity::complex: return "complex";
    case Complexity::fine_grained: return "fine_grained";
  }
  return "simple";
}

const std::vector<Task>& all_tasks() {
  static const std::vector<Task> tasks = {Task::story,        Task::dialogue,  Task::diary,
                                          Task::architecture, Task::code_function, Task::user_info,
                                          Task::company_info, Task::math_formula};
  return tasks;
}

Task parse_task(std::string_view name) {
  for (Task t : all_tasks())
    if (to_string(t) == name) return t;
  throw TemplateMissing("no template for task '" + std::string(name) + "'");
}

Complexity parse_complexity(std::string_view name) {
  for (auto c : {Complexity::simple, Complexity::complex, Complexity::fine_grained})
    if (to_string(c) == name) return c;
  throw ArgumentError("unknown complexity: " + std::string(name));
}

const std::vector<PromptTemplate>& templates() {
  using L = Language;
  using C = Complexity;
  static const std::vector<PromptTemplate> all = {
      {Task::story, L::en, C::simple, kEnSimpleStory, true},
      {Task::dialogue, L::en, C::simple, kEnSimpleDialogue, true},
      {Task::diary, L::en, C::simple, kEnSimpleDiary, true},
      {Task::architecture, L::en, C::simple, kEnSimpleArchitecture, true},
      {Task::story, L::en, C::complex, kEnComplexStory, true},
      {Task::diary, L::en, C::complex, kEnComplexDiary, true},
      {Task::dialogue, L::en, C::complex, kEnComplexDialogue, true},
      {Task::architecture, L::en, C::complex, kEnComplexArchitecture, true},
      {Task::code_function, L::en, C::simple, kEnSimpleCode, true},
      {Task::user_info, L::en, C::simple, kEnSimpleUser, true},
      {Task::company_info, L::en, C::simple, kEnSimpleCompany, true},
      {Task::math_formula, L::en, C::simple, kEnSimpleFormula, true},
      {Task::code_function, L::en, C::complex, kEnComplexCode, true},
      {Task::user_info, L::en, C::complex, kEnComplexUser, true},
      {Task::company_info, L::en, C::complex, kEnComplexCompany, true},
      {Task::math_formula, L::en, C::complex, kEnComplexFormula, true},
      {Task::story, L::ch, C::simple, kChSimpleStory, false},
      {Task::dialogue, L::ch, C::simple, kChSimpleDialogue, false},
      {Task::diary, L::ch, C::simple, kChSimpleDiary, false},
      {Task::architecture, L::ch, C::simple, kChSimpleArchitecture, false},
      {Task::story, L::ch, C::complex, kChComplexStory, false},
      {Task::diary, L::ch, C::complex, kChComplexDiary, false},
      {Task::dialogue, L::ch, C::complex, kChComplexDialogue, false},
      {Task::architecture, L::ch, C::complex, kChComplexArchitecture, false},
      {Task::code_function, L::ch, C::simple, kChSimpleCode, false},
      {Task::user_info, L::ch, C::simple, kChSimpleUser, false},
      {Task::company_info, L::ch, C::simple, kChSimpleCompany, false},
      {Task::math_formula, L::ch, C::simple, kChSimpleFormula, false},
      {Task::code_function, L::ch, C::complex, kChComplexCode, false},
      {Task::user_info, L::ch, C::complex, kChComplexUser, false},
      {Task::company_info, L::ch, C::complex, kChComplexCompany, false},
      {Task::math_formula, L::ch, C::complex, kChComplexFormula, false},
  };
  return all;
}

const PromptTemplate& find_template(Task task, Language language, Complexity complexity) {
  const Complexity base = complexity == Complexity::fine_grained ? Complexity::simple : complexity;
  for (const auto& t : templates())
    if (t.task == task && t.language == language && t.complexity == base) return t;
  throw TemplateMissing("no template for " + std::string(to_string(task)) + "/" +
                        std::string(sections::to_string(language)) + "/" +
                        std::string(to_string(complexity)));
}

std::string substitute(std::string_view text, int num_sections, int words_per_section) {
  std::string out(text);
  replace_all(out, "{num_section}", std::to_string(num_sections));
  replace_all(out, "{word_section}", std::to_string(words_per_section));
  return out;
}

std::string_view section_noun(Task task) {
  switch (task) {
    case Task::story: return "Chapter";
    case Task::dialogue: return "Round";
    case Task::diary: return "Day";
    case Task::architecture: return "Floor";
    case Task::code_function: return "Function";
    case Task::user_info:
    case Task::company_info: return "Profile";
    case Task::math_formula: return "Formula";
  }
  return "Section";
}

std::string constraint_clause(const ConstraintSpec& spec, Task task) {
  spec.validate();
  const std::string where = std::string(section_noun(task)) + " " + std::to_string(spec.section_index);
  switch (spec.kind) {
    case ConstraintKind::first_char:
      return "The first word of " + where + " must begin with the letter '" + spec.value + "'.";
    case ConstraintKind::keyword:
      return where + " must include the keyword '" + spec.value + "'.";
    case ConstraintKind::theme: {
      std::string list;
      for (std::size_t i = 0; i < spec.theme.size(); ++i) list += (i ? ", " : "") + spec.theme[i];
      const std::string name = spec.value.empty() ? spec.theme.front() : spec.value;
      return where + " must revolve around the theme of " + name + " (" + list + ").";
    }
  }
  return {};
}

std::string render(Task task, Language language, Complexity complexity, int num_sections,
                   int words_per_section, const std::vector<ConstraintSpec>& constraints) {
  if (num_sections < 1) throw ArgumentError("render: num_sections must be >= 1");
  if (words_per_section < 1) throw ArgumentError("render: words_per_section must be >= 1");
  std::string out = substitute(find_template(task, language, complexity).text, num_sections,
                               words_per_section);
  if (complexity != Complexity::fine_grained || constraints.empty()) return out;

  std::string clauses;
  for (const auto& c : constraints) clauses += " " + constraint_clause(c, task);
  const auto at = out.find(std::string("\n\n") + std::string(kStartedLine));
  if (at == std::string::npos) throw TemplateMissing("template lacks the started line");
  out.insert(at, clauses);
  return out;
}

sections::TaskProfile profile_for(Task task, Complexity, Language language) {
  using F = sections::HeaderFamily;
  using V = sections::Validator;
  switch (task) {
    case Task::story: return {F::chapter, V::none, language};
    case Task::dialogue: return {F::round, V::none, language};
    case Task::diary: return {F::day, V::none, language};
    case Task::architecture: return {F::floor, V::none, language};
    case Task::code_function: return {F::function_comment, V::code_function, language};
    case Task::user_info: return {F::record_index, V::user_record, language};
    case Task::company_info: return {F::record_index, V::company_record, language};
    case Task::math_formula: return {F::formula_comment, V::latex_equation, language};
  }
  return {};
}

std::string_view judge_template() { return kJudge; }

std::string render_judge(std::string_view user_request, std::string_view model_response) {
  // Single pass so placeholder-like text inside the inputs is left alone.
  std::string out;
  const std::string_view t = kJudge;
  constexpr std::string_view req = "{user_request}";
  constexpr std::string_view resp = "{model_response}";
  const auto a = t.find(req);
  const auto b = t.find(resp);
  out.append(t.substr(0, a));
  out.append(user_request);
  out.append(t.substr(a + req.size(), b - a - req.size()));
  out.append(model_response);
  out.append(t.substr(b + resp.size()));
  return out;
}

}  // namespace steady::prompts
